"""Discrete Fourier transform for arbitrary lengths.

Power-of-two lengths run an iterative radix-2 decimation-in-time transform,
vectorised over every other axis of the input. Any other length goes through
Bluestein's chirp-z identity, which re-expresses the DFT as a circular
convolution of power-of-two size.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import InvalidParamsError


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@lru_cache(maxsize=64)
def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=64)
def _twiddles(m: int) -> np.ndarray:
    return np.exp(-2j * np.pi * np.arange(m // 2) / m)


def _radix2(x: np.ndarray) -> np.ndarray:
    """Forward transform of the last axis of a 2-D array, length a power of two."""
    batch, n = x.shape
    y = x[:, _bit_reverse(n)]
    m = 2
    while m <= n:
        half = m // 2
        y = y.reshape(batch, n // m, m)
        top = y[..., :half]
        bot = y[..., half:] * _twiddles(m)
        y = np.concatenate((top + bot, top - bot), axis=-1)
        m *= 2
    return y.reshape(batch, n)


@lru_cache(maxsize=64)
def _bluestein_kernel(n: int):
    m = 1
    while m < 2 * n - 1:
        m *= 2
    k = np.arange(n)
    # k*k mod 2n keeps the chirp argument small, so large k loses no phase precision
    w = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = np.conj(w)
    b[m - n + 1:] = np.conj(w[1:][::-1])
    return m, w, _radix2(b[None, :])[0]


def _bluestein(x: np.ndarray) -> np.ndarray:
    batch, n = x.shape
    m, w, b_hat = _bluestein_kernel(n)
    a = np.zeros((batch, m), dtype=np.complex128)
    a[:, :n] = x * w
    conv_hat = _radix2(a) * b_hat
    # inverse via conjugation: ifft(z) = conj(fft(conj(z))) / m
    conv = np.conj(_radix2(np.conj(conv_hat))) / m
    return conv[:, :n] * w


def fft(x, n=None, axis=-1) -> np.ndarray:
    """Forward DFT ``X[k] = sum_n x[n] exp(-2j*pi*k*n/N)`` along ``axis``.

    ``n`` zero-pads (it may not truncate). The result is complex128.
    """
    a = np.asarray(x, dtype=np.complex128)
    a = np.moveaxis(a, axis, -1)
    length = a.shape[-1]
    size = length if n is None else int(n)
    if size < 1:
        raise InvalidParamsError("DFT size must be >= 1")
    if size < length:
        raise InvalidParamsError(f"DFT size {size} smaller than input length {length}")
    lead = a.shape[:-1]
    flat = np.zeros((int(np.prod(lead, dtype=np.int64)), size), dtype=np.complex128)
    flat[:, :length] = a.reshape(-1, length)
    if size == 1:
        out = flat
    elif _is_pow2(size):
        out = _radix2(flat)
    else:
        out = _bluestein(flat)
    return np.moveaxis(out.reshape(lead + (size,)), -1, axis)


def ifft(x, n=None, axis=-1) -> np.ndarray:
    a = np.asarray(x, dtype=np.complex128)
    size = a.shape[axis] if n is None else int(n)
    return np.conj(fft(np.conj(a), n=n, axis=axis)) / size


def dft(seq, size=None) -> np.ndarray:
    """Spectrum of a 1-D sequence, zero-padded to ``size`` when given."""
    x = np.asarray(seq)
    if x.ndim != 1:
        raise InvalidParamsError("dft expects a 1-D sequence")
    if x.size == 0:
        raise InvalidParamsError("dft of an empty sequence is undefined")
    return fft(x, n=size)


def fftshift(x, axis=-1) -> np.ndarray:
    """Roll so that bin 0 lands at index ``N // 2``."""
    x = np.asarray(x)
    return np.roll(x, x.shape[axis] // 2, axis=axis)
