"""
Exact sparse linear algebra over an arbitrary field.

Vectors are dicts {index: scalar} with no stored zeros.  Scalars only need
+, -, *, / and truthiness, so the same code serves Fraction (classical
modules) and QScalar (quantum modules).
"""

from __future__ import annotations

from fractions import Fraction


def cost(x):
    """Heuristic size of a scalar; small pivots keep fractions small."""
    s = getattr(x, "size", None)
    if s is not None:
        return s()
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    return abs(x).bit_length()


def inverse(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def vadd(u, v, c=1):
    """u + c*v as a new dict."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k)
        y = c * x if y is None else y + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(v, c):
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v):
    return {k: x for k, x in v.items() if x}


class Echelon:
    """
    Incrementally maintained reduced row echelon form.

    Every accepted vector gets an index (0, 1, ...) in ``basis``; rows are
    kept as combinations of accepted vectors so that ``coords`` can express
    any vector of the span in terms of them.
    """

    def __init__(self):
        self.rows = []      # (pivot, reduced vector, combination over accepted)
        self.pivots = {}    # pivot -> position in rows
        self.basis = []     # accepted original vectors

    def __len__(self):
        return len(self.basis)

    def _reduce(self, v):
        """Return (remainder, combo) with v = remainder + sum combo_i basis_i."""
        v = dict(v)
        combo = {}
        for piv, row, rc in self.rows:
            c = v.get(piv)
            if c:
                for k, x in row.items():
                    y = v.get(k)
                    y = -c * x if y is None else y - c * x
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
                for k, x in rc.items():
                    y = combo.get(k)
                    y = c * x if y is None else y + c * x
                    if y:
                        combo[k] = y
                    else:
                        combo.pop(k, None)
        return v, combo

    def add(self, v):
        """Try to add v; returns its new basis index, or None if dependent."""
        rem, combo = self._reduce(v)
        if not rem:
            return None
        idx = len(self.basis)
        self.basis.append(dict(v))
        # rem = v - sum combo_i b_i
        rc = {k: -x for k, x in combo.items()}
        rc[idx] = 1
        piv = min(rem, key=lambda k: (cost(rem[k]), k))
        inv = inverse(rem[piv])
        rem = {k: x * inv for k, x in rem.items()}
        rc = {k: x * inv for k, x in rc.items()}
        # eliminate the new pivot from existing rows
        new_rows = []
        for p, row, c0 in self.rows:
            c = row.get(piv)
            if c:
                row = vadd(row, rem, -c)
                c0 = vadd(c0, rc, -c)
            new_rows.append((p, row, c0))
        new_rows.append((piv, rem, rc))
        self.rows = new_rows
        self.pivots[piv] = len(new_rows) - 1
        return idx

    def contains(self, v):
        rem, _ = self._reduce(v)
        return not rem

    def coords(self, v):
        """Coefficients of v over ``basis``; None if v is not in the span."""
        rem, combo = self._reduce(v)
        if rem:
            return None
        return combo


def rank(vectors):
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def independent_subset(vectors):
    """Indices of a maximal independent subset (greedy, in order) and the echelon."""
    e = Echelon()
    chosen = []
    for i, v in enumerate(vectors):
        if e.add(v) is not None:
            chosen.append(i)
    return chosen, e


def kernel(columns, ncols):
    """
    Basis of {x : sum_j x_j columns[j] = 0} for a matrix given by columns.
    """
    e = Echelon()
    owner = []
    ker = []
    for j in range(ncols):
        col = columns.get(j, {}) if isinstance(columns, dict) else columns[j]
        c = e.coords(col)
        if c is None:
            e.add(col)
            owner.append(j)
        else:
            x = {owner[i]: -y for i, y in c.items()}
            x[j] = 1
            ker.append(x)
    return ker
