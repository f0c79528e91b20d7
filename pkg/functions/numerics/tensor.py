#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tenseurs et différentiation automatique
---------------------------------------
Ce module contient le type Tensor (tableau numpy + gradient) et la bande de calcul
(ComputationTape) qui enregistre les opérations primitives dans l'ordre de leur
exécution. Le parcours inverse de la bande fournit les gradients (mode inverse).

Les opérations ne sont enregistrées que si une bande est active (voir recording())
et qu'au moins une entrée demande un gradient: l'inférence se fait donc sans bande.
"""

import threading
from contextlib import contextmanager

import numpy as np

from functions.errors import DimensionError, NumericError, ParameterError, UsageError

DEFAULT_DTYPE = np.float64

_local = threading.local()


class ComputationTape:
    """
    Bande de calcul.
    Liste ordonnée des noeuds produits par les primitives; l'ordre de création est
    un ordre topologique, le parcours inverse suffit donc à propager les adjoints.
    """

    def __init__(self):
        """Initialise une bande vide."""
        self.entries = []

    def __len__(self):
        return len(self.entries)

    def record(self, node):
        """
        Ajoute un noeud à la bande.

        Args:
            node (Tensor): Résultat d'une primitive
        """
        self.entries.append(node)

    def backward(self, loss):
        """
        Rejoue la bande à l'envers à partir d'une perte scalaire.

        Args:
            loss (Tensor): Perte scalaire enregistrée sur cette bande
        """
        if loss.data.size != 1:
            raise DimensionError(f"backward attend une perte scalaire, reçu la forme {loss.shape}")
        loss.grad = np.ones_like(loss.data)
        for node in reversed(self.entries):
            if node.grad is None or node._backward is None:
                continue
            parent_grads = node._backward(node.grad)
            for parent, grad in zip(node._parents, parent_grads):
                if grad is None or not parent.requires_grad:
                    continue
                parent._accumulate(grad)

    def clear(self):
        """Libère les noeuds intermédiaires (à appeler entre deux pas d'entraînement)."""
        for node in self.entries:
            node._parents = ()
            node._backward = None
            node._tape = None
            node.grad = None
        self.entries = []


def active_tape():
    """
    Retourne la bande active du fil d'exécution courant.

    Returns:
        ComputationTape | None: Bande active, None en mode inférence
    """
    return getattr(_local, "tape", None)


@contextmanager
def recording(tape=None):
    """
    Active une bande de calcul pour le fil d'exécution courant.

    Args:
        tape (ComputationTape, optional): Bande à utiliser. Par défaut une nouvelle bande.

    Yields:
        ComputationTape: La bande active
    """
    tape = tape if tape is not None else ComputationTape()
    previous = active_tape()
    _local.tape = tape
    try:
        yield tape
    finally:
        _local.tape = previous


@contextmanager
def no_recording():
    """Désactive temporairement l'enregistrement (évaluation, différences finies)."""
    previous = active_tape()
    _local.tape = None
    try:
        yield
    finally:
        _local.tape = previous


class Tensor:
    """
    Tenseur dense: valeurs numpy, gradient optionnel de même forme.
    """

    def __init__(self, data, requires_grad=False, dtype=None):
        """
        Initialise un tenseur.

        Args:
            data (array_like): Valeurs
            requires_grad (bool): Le tenseur reçoit-il un gradient
            dtype (numpy.dtype, optional): Type des valeurs. Par défaut float64 pour
                les entrées non flottantes.
        """
        array = np.asarray(data, dtype=dtype)
        if dtype is None and not np.issubdtype(array.dtype, np.floating):
            array = array.astype(DEFAULT_DTYPE)
        self.data = array
        self.requires_grad = requires_grad
        self.grad = None
        self._parents = ()
        self._backward = None
        self._tape = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    def item(self):
        return float(self.data.reshape(-1)[0])

    def numpy(self):
        return self.data

    def zero_grad(self):
        self.grad = None

    def _accumulate(self, grad):
        grad = _unbroadcast(grad, self.shape)
        if self.grad is None:
            self.grad = np.array(grad, dtype=self.data.dtype, copy=True)
        else:
            self.grad = self.grad + grad

    def backward(self):
        """Propage le gradient d'une perte scalaire vers toutes les feuilles atteignables."""
        if self._tape is None:
            raise UsageError("ce tenseur n'a pas été produit sous une bande active")
        self._tape.backward(self)

    # Surcharges d'opérateurs
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, index):
        return getitem(self, index)


def as_tensor(value, dtype=None):
    """
    Convertit une valeur en Tensor constant (sans gradient).

    Args:
        value (Tensor | array_like): Valeur à convertir
        dtype (numpy.dtype, optional): Type souhaité

    Returns:
        Tensor: Le tenseur
    """
    if isinstance(value, Tensor):
        return value
    return Tensor(value, dtype=dtype)


def _pair(a, b):
    """Convertit deux opérandes; un scalaire prend le type de l'autre tenseur."""
    if isinstance(a, Tensor) and not isinstance(b, Tensor):
        return a, Tensor(np.asarray(b, dtype=a.dtype))
    if isinstance(b, Tensor) and not isinstance(a, Tensor):
        return Tensor(np.asarray(a, dtype=b.dtype)), b
    return as_tensor(a), as_tensor(b)


def _unbroadcast(grad, shape):
    """Somme un gradient sur les axes issus d'une diffusion (broadcasting)."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _result(data, parents, backward):
    """Construit le résultat d'une primitive et l'enregistre si nécessaire."""
    out = Tensor(data)
    tape = active_tape()
    if tape is not None and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = parents
        out._backward = backward
        out._tape = tape
        tape.record(out)
    return out


# Opérations élémentaires

def add(a, b):
    a, b = _pair(a, b)
    return _result(a.data + b.data, (a, b), lambda g: (g, g))


def sub(a, b):
    a, b = _pair(a, b)
    return _result(a.data - b.data, (a, b), lambda g: (g, -g))


def mul(a, b):
    a, b = _pair(a, b)
    return _result(a.data * b.data, (a, b), lambda g: (g * b.data, g * a.data))


def div(a, b):
    a, b = _pair(a, b)
    return _result(a.data / b.data, (a, b),
                   lambda g: (g / b.data, -g * a.data / (b.data * b.data)))


def exp(a):
    a = as_tensor(a)
    out_data = np.exp(a.data)
    return _result(out_data, (a,), lambda g: (g * out_data,))


def log(a):
    a = as_tensor(a)
    return _result(np.log(a.data), (a,), lambda g: (g / a.data,))


def tanh(a):
    a = as_tensor(a)
    out_data = np.tanh(a.data)
    return _result(out_data, (a,), lambda g: (g * (1.0 - out_data * out_data),))


def gelu(a):
    """
    GELU (approximation tanh), activation du réseau feed-forward.

    Args:
        a (Tensor): Entrée

    Returns:
        Tensor: GELU(a)
    """
    a = as_tensor(a)
    x = a.data
    c = np.sqrt(2.0 / np.pi)
    inner = c * (x + 0.044715 * x ** 3)
    t = np.tanh(inner)
    out_data = 0.5 * x * (1.0 + t)

    def backward(g):
        d_inner = c * (1.0 + 3 * 0.044715 * x ** 2)
        return (g * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * d_inner),)

    return _result(out_data, (a,), backward)


# Réductions et manipulations de forme

def sum(a, axis=None, keepdims=False):  # noqa: A001
    a = as_tensor(a)
    out_data = np.sum(a.data, axis=axis, keepdims=keepdims)

    def backward(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.shape),)

    return _result(out_data, (a,), backward)


def mean(a, axis=None, keepdims=False):
    a = as_tensor(a)
    count = a.data.size if axis is None else np.prod([a.shape[i] for i in np.atleast_1d(axis)])
    return mul(sum(a, axis=axis, keepdims=keepdims), 1.0 / count)


def reshape(a, shape):
    a = as_tensor(a)
    return _result(a.data.reshape(shape), (a,), lambda g: (g.reshape(a.shape),))


def transpose(a, axes):
    a = as_tensor(a)
    inverse = np.argsort(axes)
    return _result(np.transpose(a.data, axes), (a,), lambda g: (np.transpose(g, inverse),))


def swapaxes(a, axis1=-1, axis2=-2):
    a = as_tensor(a)
    return _result(np.swapaxes(a.data, axis1, axis2), (a,),
                   lambda g: (np.swapaxes(g, axis1, axis2),))


def broadcast_to(a, shape):
    a = as_tensor(a)
    return _result(np.broadcast_to(a.data, shape).copy(), (a,), lambda g: (g,))


def getitem(a, index):
    a = as_tensor(a)

    def backward(g):
        full = np.zeros(a.shape, dtype=g.dtype)
        np.add.at(full, index, g)
        return (full,)

    return _result(a.data[index], (a,), backward)


def concat(tensors, axis=0):
    tensors = [as_tensor(t) for t in tensors]
    out_data = np.concatenate([t.data for t in tensors], axis=axis)
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def backward(g):
        return tuple(np.split(g, bounds, axis=axis))

    return _result(out_data, tuple(tensors), backward)


# Algèbre linéaire

def matmul(a, b):
    """
    Produit matriciel (avec dimensions de lot diffusées).

    Args:
        a (Tensor): Tenseur [..., M, K]
        b (Tensor): Tenseur [..., K, N]

    Returns:
        Tensor: Produit [..., M, N]
    """
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise DimensionError(f"matmul: formes incompatibles {a.shape} et {b.shape}")
    out_data = np.matmul(a.data, b.data)

    def backward(g):
        return (np.matmul(g, np.swapaxes(b.data, -1, -2)),
                np.matmul(np.swapaxes(a.data, -1, -2), g))

    return _result(out_data, (a, b), backward)


# Normalisations

def softmax(x, axis=-1):
    """
    Softmax stable (soustraction du maximum de chaque ligne).

    Args:
        x (Tensor): Entrée
        axis (int): Axe normalisé. Par défaut le dernier.

    Returns:
        Tensor: Lignes positives de somme 1
    """
    x = as_tensor(x)
    if np.isnan(x.data).any():
        raise NumericError("softmax: entrée NaN")
    shifted = x.data - np.max(x.data, axis=axis, keepdims=True)
    e = np.exp(shifted)
    out_data = e / np.sum(e, axis=axis, keepdims=True)

    def backward(g):
        inner = np.sum(g * out_data, axis=axis, keepdims=True)
        return (out_data * (g - inner),)

    return _result(out_data, (x,), backward)


def log_softmax(x, axis=-1):
    x = as_tensor(x)
    if np.isnan(x.data).any():
        raise NumericError("log_softmax: entrée NaN")
    shifted = x.data - np.max(x.data, axis=axis, keepdims=True)
    log_norm = np.log(np.sum(np.exp(shifted), axis=axis, keepdims=True))
    out_data = shifted - log_norm
    probs = np.exp(out_data)

    def backward(g):
        return (g - probs * np.sum(g, axis=axis, keepdims=True),)

    return _result(out_data, (x,), backward)


def layer_norm(x, gamma, beta, eps=1e-5):
    """
    Normalisation de couche sur le dernier axe, suivie d'une transformation affine.

    Args:
        x (Tensor): Entrée [..., D]
        gamma (Tensor): Échelle [D]
        beta (Tensor): Décalage [D]
        eps (float): Garde contre une variance nulle

    Returns:
        Tensor: Sortie [..., D]
    """
    x, gamma, beta = as_tensor(x), as_tensor(gamma), as_tensor(beta)
    if x.shape[-1] != gamma.shape[-1] or x.shape[-1] != beta.shape[-1]:
        raise DimensionError(f"layer_norm: formes incompatibles {x.shape}, {gamma.shape}, {beta.shape}")
    mu = np.mean(x.data, axis=-1, keepdims=True)
    centered = x.data - mu
    var = np.mean(centered * centered, axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = centered * inv_std
    out_data = xhat * gamma.data + beta.data

    def backward(g):
        dxhat = g * gamma.data
        dx = inv_std * (dxhat
                        - np.mean(dxhat, axis=-1, keepdims=True)
                        - xhat * np.mean(dxhat * xhat, axis=-1, keepdims=True))
        return dx, g * xhat, g

    return _result(out_data, (x, gamma, beta), backward)


def cross_entropy(logits, labels):
    """
    Entropie croisée moyenne sur le lot.

    Args:
        logits (Tensor): Scores [B, K]
        labels (array_like): Classes [B]

    Returns:
        Tensor: Perte scalaire
    """
    logits = as_tensor(logits)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    batch, classes = logits.shape
    if labels.shape[0] != batch:
        raise DimensionError(f"cross_entropy: {batch} lignes de scores pour {labels.shape[0]} étiquettes")
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise ParameterError(f"cross_entropy: étiquette hors de [0, {classes})")
    if np.isnan(logits.data).any():
        raise NumericError("cross_entropy: scores NaN")
    shifted = logits.data - np.max(logits.data, axis=-1, keepdims=True)
    log_norm = np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))
    log_probs = shifted - log_norm
    rows = np.arange(batch)
    out_data = np.array(-np.mean(log_probs[rows, labels]), dtype=logits.dtype)

    def backward(g):
        grad = np.exp(log_probs)
        grad[rows, labels] -= 1.0
        return (grad * (g / batch),)

    return _result(out_data, (logits,), backward)
