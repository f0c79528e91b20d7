#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Points de reprise
-----------------
Format binaire à plat des tenseurs nommés. Pour chaque tenseur:
longueur du nom (uint32), nom UTF-8, rang (uint32), extents (uint32 chacun),
puis les valeurs en flottants 64 bits little-endian. La configuration qui a
produit les paramètres est écrite à côté, en JSON texte (<fichier>.json).
"""

import json
import logging
from collections import OrderedDict
from pathlib import Path

import numpy as np

from functions.errors import ParameterError
from functions.model.adformer import ModelConfig, init_parameters

logger = logging.getLogger(__name__)

_U32 = np.dtype("<u4")
_F64 = np.dtype("<f8")


def encode_tensors(tensors):
    """
    Sérialise des tableaux nommés.

    Args:
        tensors (dict): Nom -> ndarray

    Returns:
        bytes: Contenu binaire
    """
    chunks = []
    for name, values in tensors.items():
        values = np.asarray(values)
        raw_name = name.encode("utf-8")
        chunks.append(np.array([len(raw_name)], dtype=_U32).tobytes())
        chunks.append(raw_name)
        chunks.append(np.array([values.ndim, *values.shape], dtype=_U32).tobytes())
        chunks.append(np.ascontiguousarray(values, dtype=_F64).tobytes())
    return b"".join(chunks)


def decode_tensors(blob):
    """
    Relit le contenu produit par encode_tensors.

    Args:
        blob (bytes): Contenu binaire

    Returns:
        OrderedDict: Nom -> ndarray float64
    """
    tensors = OrderedDict()
    offset = 0

    def take(count, dtype):
        nonlocal offset
        size = count * dtype.itemsize
        if offset + size > len(blob):
            raise ParameterError(f"point de reprise tronqué à l'octet {offset}")
        out = np.frombuffer(blob, dtype=dtype, count=count, offset=offset)
        offset += size
        return out

    while offset < len(blob):
        name_len = int(take(1, _U32)[0])
        if offset + name_len > len(blob):
            raise ParameterError(f"point de reprise tronqué à l'octet {offset}")
        name = blob[offset:offset + name_len].decode("utf-8")
        offset += name_len
        rank = int(take(1, _U32)[0])
        shape = tuple(int(e) for e in take(rank, _U32))
        tensors[name] = take(int(np.prod(shape, dtype=np.int64)), _F64).reshape(shape).copy()
    return tensors


def save_checkpoint(path, params, config):
    """
    Écrit les paramètres entraînables et le manifeste de configuration.

    Args:
        path (str | Path): Fichier binaire
        params (ParameterSet): Paramètres
        config (ModelConfig): Configuration productrice
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_tensors(params.state()))
    manifest_path(path).write_text(json.dumps(config.to_dict(), indent=2, sort_keys=False) + "\n",
                                   encoding="utf-8")
    logger.info("point de reprise écrit: %s (%d tenseurs)", path, len(params))


def manifest_path(path):
    path = Path(path)
    return path.with_name(path.name + ".json")


def load_checkpoint(path):
    """
    Relit un point de reprise et reconstruit le modèle.

    Args:
        path (str | Path): Fichier binaire

    Returns:
        tuple: (ModelConfig, ParameterSet)
    """
    path = Path(path)
    config = ModelConfig.from_dict(json.loads(manifest_path(path).read_text(encoding="utf-8")))
    params = init_parameters(config)
    params.load_state(decode_tensors(path.read_bytes()))
    return config, params
