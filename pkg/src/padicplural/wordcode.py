"""Pack Unicode words into big natural numbers, 32 bits per code point.

The last character occupies the least-significant 32 bits, so words with a
common suffix differ by a multiple of a high power of two and are close in
the 2-adic metric.
"""
from __future__ import annotations

from dataclasses import dataclass

from .padic import int_valuation

CHUNK_BITS = 32
_CHUNK_MASK = (1 << CHUNK_BITS) - 1
_MAX_CODE_POINT = 0x10FFFF


class NulCharacter(ValueError):
    pass


class InvalidCodePoint(ValueError):
    pass


class EqualWords(ValueError):
    pass


def encode(word: str) -> int:
    """Big-endian UTF-32 packing of ``word``; the empty string encodes to 0.

    >>> encode("t")
    116
    """
    n = 0
    for i, ch in enumerate(word):
        cp = ord(ch)
        if cp == 0:
            raise NulCharacter(f"U+0000 at position {i} in {word!r}")
        n = (n << CHUNK_BITS) | cp
    return n


def decode(n: int) -> str:
    """Inverse of :func:`encode`.

    Raises :class:`InvalidCodePoint` when any 32-bit chunk is zero, a
    surrogate, or above U+10FFFF, which is how a regression line signals
    that its output is not a word.
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < 0:
        raise InvalidCodePoint(f"negative value {n}")
    chars = []
    while n:
        cp = n & _CHUNK_MASK
        if cp == 0 or cp > _MAX_CODE_POINT or 0xD800 <= cp <= 0xDFFF:
            raise InvalidCodePoint(f"chunk {cp:#x} is not a Unicode scalar value")
        chars.append(chr(cp))
        n >>= CHUNK_BITS
    return "".join(reversed(chars))


@dataclass(frozen=True)
class EncodedWord:
    text: str
    value: int

    @classmethod
    def of(cls, text: str) -> "EncodedWord":
        return cls(text, encode(text))


def _value(w: "EncodedWord | str | int") -> int:
    if isinstance(w, EncodedWord):
        return w.value
    if isinstance(w, str):
        return encode(w)
    return w


def suffix_agreement(a: "EncodedWord | str | int", b: "EncodedWord | str | int") -> int:
    """Largest ``k`` with ``2**(32*k)`` dividing ``encode(a) - encode(b)``.

    This is the number of trailing characters the two words share.
    """
    diff = _value(a) - _value(b)
    if diff == 0:
        raise EqualWords("suffix agreement of a word with itself is unbounded")
    return int_valuation(diff, 2) // CHUNK_BITS
