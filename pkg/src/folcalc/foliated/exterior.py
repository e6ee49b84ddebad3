"""Generic exterior algebra on coordinate index tuples.

A coordinate form is a dict {legs: scalar} where legs is a strictly
increasing tuple of axis indices and the scalar type supports +, *, unary -,
.is_zero() and .partial(axis).  Both the torus forms (TrigPoly scalars) and
the local-model forms (fiber-polynomial scalars) reuse these routines, which
keeps a single exact implementation of d and the wedge.
"""

from __future__ import annotations


def merge_sign(a: tuple, b: tuple):
    """Sign of sorting the concatenation a+b; (0, None) if indices repeat.

    a and b are strictly increasing tuples.  Returns (sign, merged) where
    merged is the ascending union and sign the parity of the shuffle.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    sign = 1
    merged = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return 0, None
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining len(a)-i elements of a
            if (len(a) - i) % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return sign, tuple(merged)


def sort_sign(seq):
    """(sign, sorted tuple) for an arbitrary index sequence; (0, None) on repeats."""
    seq = list(seq)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(seq)):
        if seq[i - 1] == seq[i]:
            return 0, None
    return sign, tuple(seq)


def add_into(blocks: dict, legs: tuple, value):
    """blocks[legs] += value, dropping exact zeros."""
    if value.is_zero():
        return
    cur = blocks.get(legs)
    s = value if cur is None else cur + value
    if s.is_zero():
        blocks.pop(legs, None)
    else:
        blocks[legs] = s


def coord_wedge(a: dict, b: dict) -> dict:
    out = {}
    for la, fa in a.items():
        for lb, fb in b.items():
            sign, legs = merge_sign(la, lb)
            if sign == 0:
                continue
            term = fa * fb
            if sign < 0:
                term = -term
            add_into(out, legs, term)
    return out


def coord_d(blocks: dict, dim: int) -> dict:
    """Exterior derivative: d(f dx_S) = sum_a (partial_a f) dx_a ^ dx_S."""
    out = {}
    for legs, f in blocks.items():
        for a in range(dim):
            df = f.partial(a)
            if df.is_zero():
                continue
            sign, merged = merge_sign((a,), legs)
            if sign == 0:
                continue
            add_into(out, merged, df if sign > 0 else -df)
    return out


def coord_contract(blocks: dict, components: list) -> dict:
    """Interior product with the vector field sum_a components[a] d/dx_a."""
    out = {}
    for legs, f in blocks.items():
        for pos, axis in enumerate(legs):
            comp = components[axis]
            if comp is None or comp.is_zero():
                continue
            term = f * comp
            if pos % 2:
                term = -term
            add_into(out, legs[:pos] + legs[pos + 1 :], term)
    return out


def coord_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for legs, f in b.items():
        add_into(out, legs, f)
    return out


def coord_neg(a: dict) -> dict:
    return {legs: -f for legs, f in a.items()}
