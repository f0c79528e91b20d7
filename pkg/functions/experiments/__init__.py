#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package des expériences
-----------------------
Ce package contient l'exécution des protocoles à plusieurs graines et des études
(ablations, longueur d'échantillon, recouvrement).
"""
