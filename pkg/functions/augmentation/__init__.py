#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package des augmentations
-------------------------
Ce package contient la banque d'augmentations et son gestionnaire.
"""
