#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Package d'évaluation
--------------------
Ce package contient la partition des sujets, le vote majoritaire et les métriques
au niveau échantillon et au niveau sujet.
"""
