"""Group extensions A x|_c G built from a 2-cocycle, with the projection
pi and inclusion iota, and cochain lifting/restriction along them.

The total group indexes pairs (a, g) a-major (kernel element lexicographic,
then base element), so the identity (0, 1) lands at index 0.  The group law
(a,g)(b,h) = (a + g.b + c(g,h), gh) is driven by precomputed kernel
addition/action tables, so the total multiplication table is only
materialized when something downstream really needs a FiniteGroup.
"""

from __future__ import annotations

import json

from .cochains import Cochain, cochain_from_json, cochain_to_json, first_cocycle_defect, max_entries_limit, nonid_tuples
from .errors import KernelNotFinite, NotACocycle, ResourceLimit
from .groups import FiniteGroup, group_from_json, group_from_table, group_to_json
from .modules import GModule, module_from_json, module_to_json, trivial_module


class GroupExtension:
    def __init__(self, kernel: GModule, cocycle: Cochain, max_entries=None):
        self.kernel = kernel
        self.cocycle = cocycle
        self.base = kernel.group
        base = self.base
        limit = max_entries_limit(max_entries)

        self.kernel_elements = list(kernel.elements())
        self.kernel_index = {a: i for i, a in enumerate(self.kernel_elements)}
        na, ng = len(self.kernel_elements), base.order
        self.order = na * ng

        self._act = [
            [self.kernel_index[kernel.act(g, a)] for a in self.kernel_elements]
            for g in range(ng)
        ]
        self._coc = [
            [
                self.kernel_index[cocycle.evaluate((g, h))] if g and h else 0
                for h in range(ng)
            ]
            for g in range(ng)
        ]
        self._neg = [self.kernel_index[kernel.neg(a)] for a in self.kernel_elements]
        if na * na <= limit:
            add = kernel.add
            idx = self.kernel_index
            elems = self.kernel_elements
            self._add = [
                [idx[add(a, b)] for b in elems] for a in elems
            ]
        else:
            self._add = None
        self._inv = {}
        self._total = None
        self._labels = None

    # -- group-like protocol (duck-typed alongside FiniteGroup) ------------

    @property
    def elements(self):
        if self._labels is None:
            base = self.base
            self._labels = tuple(
                f"({','.join(map(str, self.kernel_elements[a]))};{base.elements[g]})"
                for a in range(len(self.kernel_elements))
                for g in range(base.order)
            )
        return self._labels

    def add_kernel(self, i: int, j: int) -> int:
        if self._add is not None:
            return self._add[i][j]
        s = self.kernel.add(self.kernel_elements[i], self.kernel_elements[j])
        return self.kernel_index[s]

    def mul(self, i: int, j: int) -> int:
        ng = self.base.order
        a1, g1 = divmod(i, ng)
        a2, g2 = divmod(j, ng)
        a = self.add_kernel(self.add_kernel(a1, self._act[g1][a2]), self._coc[g1][g2])
        return a * ng + self.base.mul(g1, g2)

    def inv(self, i: int) -> int:
        # table search, not the closed formula
        j = self._inv.get(i)
        if j is None:
            for cand in range(self.order):
                if self.mul(i, cand) == 0 and self.mul(cand, i) == 0:
                    j = cand
                    break
            else:
                raise KernelNotFinite("no inverse found; extension is corrupt")
            self._inv[i] = j
        return j

    def product(self, indices) -> int:
        out = 0
        for i in indices:
            out = self.mul(out, i)
        return out

    # -- structure maps ----------------------------------------------------

    def pi(self, i: int) -> int:
        return i % self.base.order

    def iota(self, a_idx: int) -> int:
        return a_idx * self.base.order

    def pair(self, i: int):
        """(kernel index, base index) of a total element."""
        return divmod(i, self.base.order)

    def total_group(self, max_entries=None) -> FiniteGroup:
        """The total group as a validated FiniteGroup (associativity is
        already guaranteed by the cocycle condition, so it is not re-swept)."""
        if self._total is None:
            limit = max_entries_limit(max_entries)
            if self.order * self.order > limit:
                raise ResourceLimit(
                    f"total group table needs {self.order ** 2} entries (limit {limit})"
                )
            table = [
                [self.mul(i, j) for j in range(self.order)] for i in range(self.order)
            ]
            self._total = group_from_table(
                table, labels=list(self.elements), check_associativity=False
            )
        return self._total


def build_extension(kernel: GModule, cocycle: Cochain, max_entries=None) -> GroupExtension:
    """Construct A x|_c G; fails with the associativity-violating triple
    when c is not a 2-cocycle (the two failure sets coincide)."""
    if not kernel.is_torsion:
        raise KernelNotFinite("extension kernel must be finite")
    if cocycle.degree != 2:
        raise NotACocycle("extension cocycle must have degree 2")
    defect = first_cocycle_defect(cocycle)
    if defect is not None:
        raise NotACocycle(
            "extension cocycle fails the 2-cocycle condition", witness=defect
        )
    return GroupExtension(kernel, cocycle, max_entries)


def module_through_projection(ext: GroupExtension, module: GModule) -> GModule:
    """A G-module viewed as a module over the total group: the kernel acts
    trivially, everything factors through pi."""
    action = [module.action[ext.pi(i)] for i in range(ext.order)]
    return GModule(ext, module.factors, action, _validate=False)


def lift_cochain(ext: GroupExtension, omega: Cochain, max_entries=None) -> Cochain:
    """pi^* omega as a cochain of the total group (materialized; gate on
    (|Gamma|-1)^n support)."""
    n = omega.degree
    limit = max_entries_limit(max_entries)
    if (ext.order - 1) ** max(n, 1) > limit:
        raise ResourceLimit("lifted cochain support exceeds the resource limit")
    coeffs = module_through_projection(ext, omega.coeffs)
    vals = {}
    for tup in nonid_tuples(ext.order, n):
        v = omega.evaluate(tuple(ext.pi(i) for i in tup))
        if not omega.coeffs.is_zero(v):
            vals[tup] = v
    return Cochain(ext, coeffs, n, vals)


def kernel_view(ext: GroupExtension, max_entries=None) -> FiniteGroup:
    """The kernel A as a plain finite (abelian) group under addition."""
    na = len(ext.kernel_elements)
    limit = max_entries_limit(max_entries)
    if na * na > limit:
        raise ResourceLimit("kernel group table exceeds the resource limit")
    table = [[ext.add_kernel(i, j) for j in range(na)] for i in range(na)]
    labels = [",".join(map(str, a)) or "0" for a in ext.kernel_elements]
    return group_from_table(table, labels=labels, check_associativity=False)


def restrict_cochain(ext: GroupExtension, alpha: Cochain, max_entries=None) -> Cochain:
    """iota^* alpha as a cochain of the kernel group; the kernel acts
    trivially on the coefficients."""
    n = alpha.degree
    agrp = kernel_view(ext, max_entries)
    coeffs = trivial_module(agrp, alpha.coeffs.factors)
    vals = {}
    for tup in nonid_tuples(agrp.order, n):
        v = alpha.evaluate(tuple(ext.iota(a) for a in tup))
        if not alpha.coeffs.is_zero(v):
            vals[tup] = v
    return Cochain(agrp, coeffs, n, vals)


# -- serialization ---------------------------------------------------------


def extension_to_json(ext: GroupExtension) -> dict:
    return {
        "base": group_to_json(ext.base),
        "kernel": module_to_json(ext.kernel, embed_group=False),
        "cocycle": cochain_to_json(ext.cocycle),
    }


def extension_from_json(data: dict, max_entries=None) -> GroupExtension:
    """Rebuild from (base, kernel, cocycle); the total table is always
    recomputed, never trusted from input."""
    base = group_from_json(data["base"])
    kernel = module_from_json(data["kernel"], group=base)
    cocycle = cochain_from_json(data["cocycle"], base, kernel)
    return build_extension(kernel, cocycle, max_entries)


def load_extension(path: str, max_entries=None) -> GroupExtension:
    with open(path) as fh:
        return extension_from_json(json.load(fh), max_entries)
