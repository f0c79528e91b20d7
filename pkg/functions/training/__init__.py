#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package d'entraînement
----------------------
Ce package contient l'optimiseur AdamW, le calendrier cosinus et la boucle
d'entraînement avec arrêt précoce.
"""
