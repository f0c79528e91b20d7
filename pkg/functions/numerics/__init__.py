#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package numérique
-----------------
Ce package contient l'algèbre des tenseurs, la différentiation automatique en mode
inverse, les transformées de Fourier et la vérification des gradients.
"""
