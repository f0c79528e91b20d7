#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package du modèle
-----------------
Ce package contient l'embedding multi-granularité des deux branches, l'attention
intra/inter-granularité avec routeurs, l'assemblage du classifieur et les
points de sauvegarde.
"""
