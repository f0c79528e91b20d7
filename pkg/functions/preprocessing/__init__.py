#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package de prétraitement
------------------------
Ce package contient le filtrage, le ré-échantillonnage, la segmentation et la
normalisation des enregistrements EEG.
"""
