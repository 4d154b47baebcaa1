"""First-order forward-mode jets: array values carried with exact gradients.

A ``Jet`` holds ``val`` of shape ``S`` and ``grad`` of shape ``S + (N,)``,
the derivative of every entry with respect to ``N`` phase-space
coordinates.  Arithmetic follows numpy broadcasting on the value axes.
Index with plain ints, slices and ``None`` only (no Ellipsis).
"""

from __future__ import annotations

import numpy as np


class Jet:
    __slots__ = ("val", "grad")
    __array_priority__ = 100  # make ndarray (op) Jet defer to Jet

    def __init__(self, val, grad):
        self.val = np.asarray(val, dtype=float)
        self.grad = np.asarray(grad, dtype=float)
        if self.grad.shape[:-1] != self.val.shape:
            raise ValueError(f"gradient shape {self.grad.shape} does not match value shape {self.val.shape}")

    @classmethod
    def constant(cls, val, size: int) -> Jet:
        val = np.asarray(val, dtype=float)
        return cls(val, np.zeros(val.shape + (size,)))

    @property
    def shape(self):
        return self.val.shape

    @property
    def size(self) -> int:
        return self.grad.shape[-1]

    def _full(self, shape):
        return np.broadcast_to(self.grad, tuple(shape) + (self.size,))

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.grad + other.grad)
        val = self.val + other
        return Jet(val, self._full(val.shape).copy())

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.grad)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(
                self.val * other.val,
                self.val[..., None] * other.grad + other.val[..., None] * self.grad,
            )
        c = np.asarray(other, dtype=float)
        return Jet(self.val * c, c[..., None] * self.grad)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet:
        inv = 1.0 / self.val
        return Jet(inv, -(inv * inv)[..., None] * self.grad)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p: float):
        p = float(p)
        return Jet(self.val**p, (p * self.val ** (p - 1.0))[..., None] * self.grad)

    def sqrt(self) -> Jet:
        s = np.sqrt(self.val)
        return Jet(s, (0.5 / s)[..., None] * self.grad)

    def __getitem__(self, idx):
        return Jet(self.val[idx], self.grad[idx])

    def sum(self, axis=None) -> Jet:
        if axis is None:
            axes = tuple(range(self.val.ndim))
        else:
            axes = tuple(a % self.val.ndim for a in np.atleast_1d(axis))
        return Jet(self.val.sum(axis=axes), self.grad.sum(axis=axes))

    def swapaxes(self, a: int, b: int) -> Jet:
        return Jet(np.swapaxes(self.val, a, b), np.swapaxes(self.grad, a, b))

    def __repr__(self):
        return f"Jet(shape={self.shape}, size={self.size})"


def stack(jets, axis: int = 0) -> Jet:
    """Stack equal-shape jets along a new value axis."""
    jets = list(jets)
    nd = jets[0].val.ndim
    axis = axis % (nd + 1)
    return Jet(np.stack([j.val for j in jets], axis=axis), np.stack([j.grad for j in jets], axis=axis))
