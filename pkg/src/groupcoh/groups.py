"""Finite groups as explicit multiplication tables.

Index 0 is always the identity; all algorithms downstream rely on that to
test normalization by a plain index comparison.  Labels are opaque strings
used only for serialization.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .errors import NoIdentity, NoInverse, NotAssociative, UnknownFamily


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    elements: tuple  # labels, identity first
    table: tuple  # tuple of row tuples
    inverse: tuple = field(default=None)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    @property
    def is_abelian(self) -> bool:
        t = self.table
        n = self.order
        return all(t[i][j] == t[j][i] for i in range(n) for j in range(i + 1, n))

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k

    def noncommuting_pair(self):
        t = self.table
        for i in range(self.order):
            for j in range(i + 1, self.order):
                if t[i][j] != t[j][i]:
                    return (i, j)
        return None

    def product(self, indices) -> int:
        out = 0
        for i in indices:
            out = self.table[out][i]
        return out


def multiply(group: FiniteGroup, i: int, j: int) -> int:
    if not (0 <= i < group.order and 0 <= j < group.order):
        raise IndexError((i, j))
    return group.table[i][j]


def inverse(group: FiniteGroup, i: int) -> int:
    if not 0 <= i < group.order:
        raise IndexError(i)
    return group.inverse[i]


def group_from_table(table, labels=None, check_associativity=True) -> FiniteGroup:
    """Validate a multiplication table and normalize the identity to index 0.

    Raises NoIdentity, NoInverse (witness element) or NotAssociative
    (witness triple).
    """
    n = len(table)
    if any(len(row) != n for row in table):
        raise ValueError("table is not square")
    for row in table:
        for x in row:
            if not 0 <= x < n:
                raise ValueError(f"table entry {x} out of range")
    if labels is None:
        labels = [f"x{i}" for i in range(n)]
    labels = [str(l) for l in labels]

    ident = None
    for e in range(n):
        if all(table[e][j] == j for j in range(n)) and all(table[i][e] == i for i in range(n)):
            ident = e
            break
    if ident is None:
        raise NoIdentity("no two-sided identity in table")

    if ident != 0:
        perm = [ident] + [i for i in range(n) if i != ident]
        inv_perm = [0] * n
        for new, old in enumerate(perm):
            inv_perm[old] = new
        table = [[inv_perm[table[perm[i]][perm[j]]] for j in range(n)] for i in range(n)]
        labels = [labels[old] for old in perm]
        ident = 0

    inverses = [None] * n
    for i in range(n):
        invs = [j for j in range(n) if table[i][j] == 0]
        if len(invs) != 1 or table[invs[0]][i] != 0:
            raise NoInverse("element lacks a unique two-sided inverse", witness=labels[i])
        inverses[i] = invs[0]

    if check_associativity:
        for i in range(n):
            ti = table[i]
            for j in range(n):
                tij = table[ti[j]]
                tj = table[j]
                for k in range(n):
                    if tij[k] != ti[tj[k]]:
                        raise NotAssociative(
                            "associativity fails", witness=(labels[i], labels[j], labels[k])
                        )

    return FiniteGroup(
        order=n,
        elements=tuple(labels),
        table=tuple(tuple(row) for row in table),
        inverse=tuple(inverses),
    )


def cyclic_group(m: int) -> FiniteGroup:
    labels = ["e"] + [f"g{i}" if i > 1 else "g" for i in range(1, m)]
    table = [[(i + j) % m for j in range(m)] for i in range(m)]
    return group_from_table(table, labels)


def dihedral_group(m: int) -> FiniteGroup:
    """Dihedral group of order 2m (symmetries of the m-gon)."""
    if m < 1:
        raise UnknownFamily(f"dihedral parameter must be >= 1, got {m}")
    n = 2 * m

    def idx(rot, ref):
        return ref * m + rot

    table = []
    for a in range(n):
        i, b1 = a % m, a // m
        row = []
        for c in range(n):
            j, b2 = c % m, c // m
            # (r^i s^b1)(r^j s^b2) = r^{i + (-1)^b1 j} s^{b1+b2}
            rot = (i - j) % m if b1 else (i + j) % m
            row.append(idx(rot, (b1 + b2) % 2))
        table.append(row)
    labels = [f"r{i}" if i else "e" for i in range(m)] + [f"sr{i}" if i else "s" for i in range(m)]
    return group_from_table(table, labels)


def symmetric_group(n: int) -> FiniteGroup:
    if n > 4:
        raise UnknownFamily("symmetric groups supported up to S4")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p*q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    labels = ["".join(str(x) for x in p) for p in perms]
    return group_from_table(table, labels)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    table = []
    for i in range(n):
        for j in range(m):
            row = []
            for k in range(n):
                for l in range(m):
                    row.append(g.table[i][k] * m + h.table[j][l])
            table.append(row)
    labels = [f"({g.elements[i]},{h.elements[j]})" for i in range(n) for j in range(m)]
    return group_from_table(table, labels)


_FAMILIES = {
    "cyclic": lambda p: cyclic_group(int(p)),
    "dihedral": lambda p: dihedral_group(int(p)),
    "symmetric": lambda p: symmetric_group(int(p)),
}


def builtin_group(name: str) -> FiniteGroup:
    """Build a group from a family spec like "cyclic:4" or
    "cyclic:2*cyclic:2" (direct products join with '*')."""
    parts = name.split("*")
    groups = []
    for part in parts:
        fam, _, param = part.strip().partition(":")
        if fam not in _FAMILIES:
            raise UnknownFamily(f"unknown group family {fam!r}")
        try:
            groups.append(_FAMILIES[fam](param))
        except ValueError:
            raise UnknownFamily(f"bad parameter {param!r} for family {fam!r}")
    out = groups[0]
    for g in groups[1:]:
        out = direct_product(out, g)
    return out


def group_to_json(group: FiniteGroup) -> dict:
    return {
        "order": group.order,
        "elements": list(group.elements),
        "table": [list(row) for row in group.table],
    }


def group_from_json(data: dict) -> FiniteGroup:
    return group_from_table(data["table"], labels=data.get("elements"))


def load_group(path: str) -> FiniteGroup:
    with open(path) as fh:
        return group_from_json(json.load(fh))
