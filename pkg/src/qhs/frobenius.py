"""Frobenius duality: reshuffling between operators and invariant vectors.

A linear map T in M_{N^l x N^k} corresponds to the vector xi on the word
l + conjugate(k) via xi[i_1..i_l, j_k..j_1] = T[i, j]; the column index is
reversed.  Both directions are exact index permutations and invert each
other on the nose.
"""

from __future__ import annotations

from functools import cache

from .exact import DomainError, ExactMatrix, ExactTensor, flat_index, multi_indices
from .partitions import check_word, conjugate_word


@cache
def _reversal_map(n: int, k: int) -> tuple:
    """reversal[flat(j_1..j_k)] = flat(j_k..j_1)."""
    out = [0] * (n**k)
    for flat, idx in enumerate(multi_indices(n, k)):
        out[flat] = flat_index(tuple(reversed(idx)), n)
    return tuple(out)


def frobenius_to_fix(T: ExactMatrix, k_word: str, l_word: str, n: int):
    """Map an operator to its invariant vector; returns (tensor, word)."""
    check_word(k_word)
    check_word(l_word)
    k, l = len(k_word), len(l_word)
    if T.rows != n**l or T.cols != n**k:
        raise DomainError(
            f"shape mismatch: expected {n**l}x{n**k} for words "
            f"({k_word!r}, {l_word!r}), got {T.rows}x{T.cols}"
        )
    cols = n**k
    rev = _reversal_map(n, k)
    entries = [0] * (n ** (l + k))
    t_entries = T.entries
    for r in range(T.rows):
        base = r * cols
        for c in range(cols):
            entries[base + rev[c]] = t_entries[base + c]
    return ExactTensor((n,) * (l + k), entries), l_word + conjugate_word(k_word)


def frobenius_to_hom(xi: ExactTensor, k_word: str, l_word: str, n: int) -> ExactMatrix:
    """Inverse of frobenius_to_fix; exact roundtrip in both directions."""
    check_word(k_word)
    check_word(l_word)
    k, l = len(k_word), len(l_word)
    if xi.shape != (n,) * (l + k):
        raise DomainError(
            f"shape mismatch: expected order-{l + k} tensor over {n} for words "
            f"({k_word!r}, {l_word!r}), got shape {xi.shape}"
        )
    cols = n**k
    rev = _reversal_map(n, k)
    x_entries = xi.entries
    out = [0] * len(x_entries)
    for r in range(n**l):
        base = r * cols
        for c in range(cols):
            out[base + c] = x_entries[base + rev[c]]
    return ExactMatrix(n**l, cols, out)
