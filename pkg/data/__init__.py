#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package des données
-----------------
Ce package contient les enregistrements EEG, leur format disque, le générateur de
données synthétiques et les ensembles d'échantillons empilés.
"""
