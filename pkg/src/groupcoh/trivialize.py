"""Constructive cocycle trivialization in finite abelian extensions.

Two drivers:

* trivialize_torsion -- for an n-cocycle (n >= 2) whose values all have
  finite order: build the universal kernel A = (Z/N)^((|G|-1)^2), the
  universal 2-cocycle c, the witness b in Hom(A, M) with d2(b, c) = omega,
  the extension Gamma = A x|_c G and a primitive alpha with
  delta_Gamma alpha = pi^* omega, verified exhaustively or by seeded
  sampling.

* trivialize_general -- for arbitrary finitely generated coefficients and
  n >= 3: split off the torsion submodule, kill the free part with the
  rational averaging homotopy, and chain two torsion trivializations.

Both emit a TrivializationCertificate that verify_certificate re-checks
from scratch.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from . import intlinalg as la
from .cochains import (
    Cochain,
    RationalCochain,
    add_cochains,
    averaging_homotopy,
    coboundary,
    coboundary_value,
    cochain_from_json,
    cochain_to_json,
    first_cocycle_defect,
    max_entries_limit,
    nonid_tuples,
    solve_coboundary,
    sub_cochains,
)
from .cup import d2
from .errors import (
    DegreeTooLow,
    ExponentMismatch,
    NonTorsionValue,
    NotACocycle,
    ResourceLimit,
)
from .extensions import (
    GroupExtension,
    build_extension,
    kernel_view,
    lift_cochain,
    module_through_projection,
    restrict_cochain,
)
from .groups import group_from_json, group_to_json
from .modules import GModule, HomModule, module_from_json, module_to_json, torsion_submodule

DEFAULT_SAMPLE_SIZE = 1_000_000


# -- building blocks -------------------------------------------------------


def torsion_exponent(omega: Cochain) -> int:
    """lcm of the orders of the values of omega; 1 for the zero cochain.
    Raises NonTorsionValue (with the offending tuple) on infinite order."""
    n = 1
    for tup, v in omega.values.items():
        order = omega.coeffs.element_order(v)
        if order == 0:
            raise NonTorsionValue("cocycle value has infinite order", witness=tup)
        n = math.lcm(n, order)
    return n


def universal_kernel(group, exponent: int):
    """(A, c): A = (Z/N)^((|G|-1)^2) generated by pair symbols x_{g,h}
    (g, h nonidentity) with g . x_{h,k} = x_{gh,k} - x_{g,hk} + x_{g,h}
    and x_{1,*} = x_{*,1} = 0; c(g, h) = x_{g,h} is then a 2-cocycle."""
    order = group.order
    nonid = order - 1
    s = nonid * nonid

    def pair_index(g, h):
        return (g - 1) * nonid + (h - 1)

    if exponent == 1 or s == 0:
        kernel = GModule(group, (), [[] for _ in range(order)], _validate=False)
        c = Cochain(group, kernel, 2)
        return kernel, c

    action = []
    for g in range(order):
        mat = la.zeros(s, s)
        for h in range(1, order):
            for k in range(1, order):
                col = pair_index(h, k)
                gh = group.mul(g, h)
                hk = group.mul(h, k)
                if gh:
                    mat[pair_index(gh, k)][col] += 1
                if g and hk:
                    mat[pair_index(g, hk)][col] -= 1
                if g:
                    mat[pair_index(g, h)][col] += 1
        action.append(mat)
    kernel = GModule(group, (exponent,) * s, action)
    vals = {
        (g, h): tuple(1 if i == pair_index(g, h) else 0 for i in range(s))
        for g in range(1, order)
        for h in range(1, order)
    }
    c = Cochain(group, kernel, 2, vals)
    assert first_cocycle_defect(c) is None
    return kernel, c


def build_witness(omega: Cochain, kernel: GModule, c: Cochain) -> Cochain:
    """The (n-2)-cochain b with values in Hom(A, M) satisfying d2(b, c) =
    omega: first the pair-symbol transporter Y_(g_1..g_{n-2})(x_{g,h}) =
    -omega(g_1..g_{n-2},g,h), then b = (g_1...g_{n-2})^{-1} . Y."""
    n = omega.degree
    if n < 2:
        raise DegreeTooLow("witness construction needs degree >= 2")
    group = omega.group
    module = omega.coeffs
    exponent = kernel.exponent
    for tup, v in omega.values.items():
        if not module.is_zero(module.scale(exponent, v)):
            raise ExponentMismatch(
                f"kernel exponent {exponent} does not annihilate omega at {tup}"
            )
    hom = HomModule(kernel, module)
    order = group.order
    nonid = order - 1

    vals = {}
    for prefix in nonid_tuples(order, n - 2):
        images = [module.zero()] * kernel.dim
        if kernel.dim:
            for g in range(1, order):
                for h in range(1, order):
                    idx = (g - 1) * nonid + (h - 1)
                    images[idx] = module.neg(omega.evaluate(prefix + (g, h)))
        y = hom.from_images(images)
        t = group.inv(group.product(prefix))
        b = hom.act(t, y)
        if not hom.is_zero(b):
            vals[prefix] = b
    witness = Cochain(group, hom, n - 2, vals)
    return witness


def closed_form_alpha(ext: GroupExtension, omega: Cochain, witness: Cochain,
                      max_entries=None) -> Cochain:
    """Candidate primitive alpha((a_1,g_1)..(a_{n-1},g_{n-1})) =
    (-1)^n b_(g_1..g_{n-2})((g_1...g_{n-2}) . a_{n-1}).

    Extrapolated from the degree-2 case; callers must validate
    delta_Gamma alpha = pi^* omega before trusting it.
    """
    n = omega.degree
    limit = max_entries_limit(max_entries)
    if (ext.order - 1) ** (n - 1) > limit:
        raise ResourceLimit("closed-form primitive support exceeds the resource limit")
    hom: HomModule = witness.coeffs
    module = omega.coeffs
    coeffs = module_through_projection(ext, module)
    sign = 1 if n % 2 == 0 else -1
    ng = ext.base.order
    images_cache = {
        prefix: hom.images(v) for prefix, v in witness.values.items()
    }
    zero_images = [module.zero()] * hom.source.dim
    vals = {}
    for tup in nonid_tuples(ext.order, n - 1):
        pairs = [divmod(i, ng) for i in tup]
        gs = tuple(g for _, g in pairs[:-1])
        if 0 in gs:
            continue
        images = images_cache.get(gs)
        if images is None:
            if gs not in witness.values and witness.evaluate(gs) == hom.zero():
                continue
            images = hom.images(witness.evaluate(gs))
            images_cache[gs] = images
        a_last = ext.kernel_elements[pairs[-1][0]]
        a = ext.kernel.act(ext.base.product(gs), a_last)
        out = module.zero()
        for aj, img in zip(a, images):
            if aj:
                out = module.add(out, module.scale(aj, img))
        out = module.scale(sign, out)
        if not module.is_zero(out):
            vals[tup] = out
    return Cochain(ext, coeffs, n - 1, vals)


# -- verification of delta_Gamma alpha = pi^* omega ------------------------


def _project_tuple(ext: GroupExtension, tup):
    return tuple(ext.pi(i) for i in tup)


def verify_lift_primitive(ext: GroupExtension, omega: Cochain, alpha: Cochain,
                          max_entries=None, seed=0,
                          sample_size=DEFAULT_SAMPLE_SIZE, projector=None):
    """Check delta_Gamma alpha = pi^* omega over all Gamma^n tuples when
    that fits the resource limit, else over seeded uniform samples.

    Returns (ok, witness, info) with info = {mode, seed, checked}.
    projector overrides pi (used for composed extensions).
    """
    n = omega.degree
    total = ext.order ** n
    limit = max_entries_limit(max_entries)
    exhaustive = total <= limit
    project = projector or (lambda tup: _project_tuple(ext, tup))

    msize = omega.coeffs.size()
    if (
        exhaustive
        and n == 2
        and projector is None
        and ext._add is not None
        and msize is not None
        and msize <= 4096
    ):
        ok, witness = _verify_degree2_indexed(ext, omega, alpha)
        return ok, witness, {"mode": "exhaustive", "seed": seed, "checked": total}

    coeffs = alpha.coeffs

    def check(tup):
        lhs = coboundary_value(alpha, tup)
        rhs = omega.evaluate(project(tup))
        return coeffs.reduce(lhs) == coeffs.reduce(rhs)

    if exhaustive:
        import itertools

        for tup in itertools.product(range(ext.order), repeat=n):
            if not check(tup):
                return False, tup, {"mode": "exhaustive", "seed": seed, "checked": total}
        return True, None, {"mode": "exhaustive", "seed": seed, "checked": total}

    rng = random.Random(seed)
    for _ in range(sample_size):
        tup = tuple(rng.randrange(ext.order) for _ in range(n))
        if not check(tup):
            return False, tup, {"mode": "sampled", "seed": seed, "checked": sample_size}
    return True, None, {"mode": "sampled", "seed": seed, "checked": sample_size}


def _verify_degree2_indexed(ext: GroupExtension, omega: Cochain, alpha: Cochain):
    """Tight inner loop for the n = 2 exhaustive sweep: everything is
    pre-indexed so the per-pair work is pure list lookups."""
    module = omega.coeffs
    ng = ext.base.order
    na = len(ext.kernel_elements)
    m_elems = list(module.elements())
    m_idx = {e: i for i, e in enumerate(m_elems)}
    zero = m_idx[module.zero()]
    madd = [[m_idx[module.add(x, y)] for y in m_elems] for x in m_elems]
    mneg = [m_idx[module.neg(x)] for x in m_elems]
    mact = [[m_idx[module.act(g, x)] for x in m_elems] for g in range(ng)]
    av = [m_idx[alpha.evaluate((i,))] if i else zero for i in range(ext.order)]
    wt = [
        [m_idx[omega.evaluate((g1, g2))] if g1 and g2 else zero for g2 in range(ng)]
        for g1 in range(ng)
    ]
    act = ext._act
    coc = ext._coc
    add = ext._add
    gt = ext.base.table

    for a1 in range(na):
        add_a1 = add[a1]
        for g1 in range(ng):
            i1 = a1 * ng + g1
            av1 = av[i1]
            act_g1 = act[g1]
            coc_g1 = coc[g1]
            mact_g1 = mact[g1]
            w_g1 = wt[g1]
            gt_g1 = gt[g1]
            for a2 in range(na):
                ax = add_a1[act_g1[a2]]
                base2 = a2 * ng
                for g2 in range(ng):
                    prod = add[ax][coc_g1[g2]] * ng + gt_g1[g2]
                    lhs = madd[madd[mact_g1[av[base2 + g2]]][mneg[av[prod]]]][av1]
                    if lhs != w_g1[g2]:
                        return False, (i1, base2 + g2)
    return True, None


# -- certificates ----------------------------------------------------------


@dataclass
class TrivializationCertificate:
    mode: str  # "torsion" | "general"
    omega: Cochain
    exponent: int = None
    kernel: GModule = None
    cocycle: Cochain = None
    witness: Cochain = None
    extension: GroupExtension = None
    alpha: Cochain = None
    partial: bool = False
    stages: dict = None
    verification: dict = field(default_factory=dict)

    @property
    def group(self):
        return self.omega.group

    @property
    def module(self):
        return self.omega.coeffs

    @property
    def degree(self):
        return self.omega.degree

    def total_order(self):
        if self.mode == "general":
            return self.stages["stage2"].extension.order
        return self.extension.order if self.extension else None

    def project(self, tup):
        """Composite projection from the final total group down to G."""
        if self.mode == "general":
            e2 = self.stages["stage2"].extension
            e1 = self.stages["stage1"].extension
            return tuple(e1.pi(e2.pi(i)) for i in tup)
        return _project_tuple(self.extension, tup)


def trivialize_torsion(omega: Cochain, max_entries=None, seed=0,
                       sample_size=DEFAULT_SAMPLE_SIZE) -> TrivializationCertificate:
    """Main torsion-coefficient driver (degree n >= 2, all values of
    finite order).  The returned certificate satisfies
    delta_Gamma alpha = pi^* omega exactly; when Gamma is too large to
    even enumerate, the certificate is emitted partial, with the (b, c)
    witness pair only."""
    n = omega.degree
    if n < 2:
        raise DegreeTooLow("trivialization needs degree >= 2")
    defect = first_cocycle_defect(omega)
    if defect is not None:
        raise NotACocycle("input is not a cocycle", witness=defect)
    exponent = torsion_exponent(omega)
    group = omega.group
    kernel, c = universal_kernel(group, exponent)
    witness = build_witness(omega, kernel, c)
    assert first_cocycle_defect(witness) is None
    assert d2(witness, c) == omega

    limit = max_entries_limit(max_entries)
    kernel_size = kernel.size()
    if kernel_size * group.order > limit:
        return TrivializationCertificate(
            mode="torsion", omega=omega, exponent=exponent, kernel=kernel,
            cocycle=c, witness=witness, partial=True,
            verification={"mode": "partial", "seed": seed, "checked": 0},
        )

    ext = build_extension(kernel, c, max_entries)
    try:
        alpha = closed_form_alpha(ext, omega, witness, max_entries)
        ok, bad, info = verify_lift_primitive(
            ext, omega, alpha, max_entries, seed, sample_size
        )
        if not ok:
            raise ResourceLimit("closed form failed, falling back to solver")
    except ResourceLimit:
        alpha = None
        try:
            lifted = lift_cochain(ext, omega, max_entries)
            alpha = solve_coboundary(lifted, max_entries)
        except ResourceLimit:
            alpha = None
        if alpha is None:
            return TrivializationCertificate(
                mode="torsion", omega=omega, exponent=exponent, kernel=kernel,
                cocycle=c, witness=witness, extension=ext, partial=True,
                verification={"mode": "partial", "seed": seed, "checked": 0},
            )
        ok, bad, info = verify_lift_primitive(
            ext, omega, alpha, max_entries, seed, sample_size
        )
        assert ok, f"solver output failed verification at {bad}"
    return TrivializationCertificate(
        mode="torsion", omega=omega, exponent=exponent, kernel=kernel,
        cocycle=c, witness=witness, extension=ext, alpha=alpha,
        verification=info,
    )


def map_coefficients(f: Cochain, matrix, target: GModule) -> Cochain:
    vals = {}
    for tup, v in f.values.items():
        w = target.reduce(la.mat_vec(matrix, v))
        if not target.is_zero(w):
            vals[tup] = w
    return Cochain(f.group, target, f.degree, vals)


def divide_cochain(f: Cochain, q: int) -> Cochain:
    vals = {}
    for tup, v in f.values.items():
        out = []
        for x in v:
            d, r = divmod(x, q)
            assert r == 0, "cochain value not divisible as required"
            out.append(d)
        vals[tup] = tuple(out)
    return Cochain(f.group, f.coeffs, f.degree, vals)


def trivialize_general(omega: Cochain, max_entries=None, seed=0,
                       sample_size=DEFAULT_SAMPLE_SIZE) -> TrivializationCertificate:
    """Driver for arbitrary finitely generated coefficients, degree >= 3.

    Pipeline: push omega to the free quotient M/M_T, find a rational
    primitive there by averaging, reduce it mod 1 to a torsion cocycle of
    degree n-1, kill that in a first extension, correct to an integral
    primitive, and kill the remaining M_T-valued defect in a second
    extension stacked on the first.
    """
    n = omega.degree
    if n < 3:
        raise DegreeTooLow("the general driver needs degree >= 3")
    defect = first_cocycle_defect(omega)
    if defect is not None:
        raise NotACocycle("input is not a cocycle", witness=defect)
    group = omega.group
    module = omega.coeffs
    q = group.order

    mt, jmap, pmap, smap = torsion_submodule(module)
    mfree = pmap.target
    p_omega = map_coefficients(omega, pmap.matrix, mfree)
    if p_omega.is_zero():
        h = RationalCochain(Cochain(group, mfree, n - 1), q)
    else:
        h = averaging_homotopy(p_omega)
    modq = GModule(group, (q,) * mfree.dim, mfree.action, _validate=False)
    hbar = Cochain(group, modq, n - 1, h.numerator.values)

    stage1 = trivialize_torsion(hbar, max_entries, seed, sample_size)
    if stage1.partial:
        raise ResourceLimit("stage-1 torsion trivialization came back partial")
    ext1 = stage1.extension

    mfree_g = module_through_projection(ext1, mfree)
    if stage1.alpha is not None and not stage1.alpha.is_zero():
        rho_lift = Cochain(ext1, mfree_g, n - 2, stage1.alpha.values)
    else:
        rho_lift = Cochain(ext1, mfree_g, n - 2)
    pi_h = Cochain(ext1, mfree_g, n - 1,
                   lift_cochain(ext1, h.numerator, max_entries).values)
    eta = divide_cochain(sub_cochains(pi_h, coboundary(rho_lift)), q)
    pi_omega = lift_cochain(ext1, omega, max_entries)
    assert coboundary(eta) == map_coefficients(pi_omega, pmap.matrix, mfree_g)

    module_g = module_through_projection(ext1, module)
    eta_tilde = map_coefficients(eta, smap.matrix, module_g)
    beta_m = sub_cochains(pi_omega, coboundary(eta_tilde))
    # the defect lands in the torsion submodule; extract its coordinates
    jt = la.mat_transpose(jmap.matrix, cols=mt.dim)
    mt_g = module_through_projection(ext1, mt)
    for tup, v in beta_m.values.items():
        back = module.reduce(la.mat_vec(jmap.matrix, la.mat_vec(jt, v)))
        assert back == v, "defect cochain has a free component"
    beta = map_coefficients(beta_m, jt, mt_g)

    stage2 = trivialize_torsion(beta, max_entries, seed, sample_size)
    if stage2.partial:
        raise ResourceLimit("stage-2 torsion trivialization came back partial")
    ext2 = stage2.extension

    eta_tilde_m = Cochain(ext1, module_g, n - 1, eta_tilde.values)
    lifted_eta = lift_cochain(ext2, eta_tilde_m, max_entries)
    module_g2 = lifted_eta.coeffs
    if stage2.alpha is not None:
        alpha_beta = map_coefficients(stage2.alpha, jmap.matrix, module_g2)
    else:
        alpha_beta = Cochain(ext2, module_g2, n - 1)
    alpha = add_cochains(lifted_eta, alpha_beta)

    cert = TrivializationCertificate(
        mode="general", omega=omega,
        stages={
            "h": h, "hbar": hbar, "stage1": stage1, "rho": stage1.alpha,
            "eta": eta, "eta_tilde": eta_tilde_m, "beta": beta,
            "stage2": stage2,
        },
        alpha=alpha,
    )
    ok, bad, info = verify_lift_primitive(
        ext2, omega, alpha, max_entries, seed, sample_size,
        projector=cert.project,
    )
    assert ok, f"composite primitive failed verification at {bad}"
    cert.verification = info
    return cert

# -- independent verification ----------------------------------------------


@dataclass
class Check:
    name: str
    ok: bool  # True / False / None (absent or skipped)
    witness: object = None
    note: str = ""

    def line(self) -> str:
        if self.ok is None:
            status = "absent"
        else:
            status = "pass" if self.ok else "FAIL"
        out = f"{self.name}: {status}"
        if self.note:
            out += f" ({self.note})"
        if self.ok is False and self.witness is not None:
            out += f" witness={self.witness}"
        return out


@dataclass
class VerificationReport:
    checks: list
    verification: dict = field(default_factory=dict)

    def ok(self, allow_partial=False) -> bool:
        if any(c.ok is False for c in self.checks):
            return False
        if any(c.ok is None for c in self.checks) and not allow_partial:
            return False
        return True

    def lines(self):
        return [c.line() for c in self.checks]


def _first_difference(f: Cochain, g: Cochain):
    for tup in set(f.values) | set(g.values):
        if f.coeffs.reduce(f.evaluate(tup)) != g.coeffs.reduce(g.evaluate(tup)):
            return tup
    return None


def _check_group_axioms(ext: GroupExtension, max_entries, seed, sample_size):
    """Identity, two-sided inverses, and associativity of the total group,
    rebuilt from the extension data (exhaustive triples when they fit the
    resource limit, seeded samples otherwise)."""
    order = ext.order
    for i in range(order):
        if ext.mul(0, i) != i or ext.mul(i, 0) != i:
            return Check("extension-identity", False, witness=i)
    for i in range(order):
        j = ext.inv(i)
        if ext.mul(i, j) != 0 or ext.mul(j, i) != 0:
            return Check("extension-inverses", False, witness=i)
    limit = max_entries_limit(max_entries)
    if order ** 3 <= limit:
        for i in range(order):
            for j in range(order):
                ij = ext.mul(i, j)
                for k in range(order):
                    if ext.mul(ij, k) != ext.mul(i, ext.mul(j, k)):
                        return Check("extension-axioms", False, witness=(i, j, k))
        note = f"associativity exhaustive over {order ** 3} triples"
    else:
        rng = random.Random(seed)
        for _ in range(sample_size):
            i, j, k = (rng.randrange(order) for _ in range(3))
            if ext.mul(ext.mul(i, j), k) != ext.mul(i, ext.mul(j, k)):
                return Check("extension-axioms", False, witness=(i, j, k))
        note = f"associativity sampled over {sample_size} triples"
    return Check("extension-axioms", True, note=note)


def _check_restriction(ext: GroupExtension, alpha: Cochain, max_entries, prefix=""):
    """The Remark's consequence: the restriction of alpha to the kernel is
    a cocycle of A with (trivial-action) coefficients."""
    name = prefix + "alpha-restriction"
    try:
        restricted = restrict_cochain(ext, alpha, max_entries)
        defect = first_cocycle_defect(restricted)
    except ResourceLimit as exc:
        return Check(name, None, note=str(exc))
    if defect is not None:
        return Check(name, False, witness=defect)
    return Check(name, True, note="exhaustive over kernel tuples")


def _verify_torsion_cert(cert, checks, max_entries, seed, sample_size, prefix=""):
    omega = cert.omega
    defect = first_cocycle_defect(omega)
    checks.append(Check(prefix + "omega-cocycle", defect is None, witness=defect))

    n_ok, bad = True, None
    for tup, v in omega.values.items():
        order = omega.coeffs.element_order(v)
        if order == 0 or order > cert.exponent or not omega.coeffs.is_zero(
            omega.coeffs.scale(cert.exponent, v)
        ):
            n_ok, bad = False, tup
            break
    checks.append(Check(prefix + "exponent-annihilates", n_ok, witness=bad,
                        note=f"N={cert.exponent}"))

    defect = first_cocycle_defect(cert.cocycle)
    checks.append(Check(prefix + "kernel-cocycle", defect is None, witness=defect))
    defect = first_cocycle_defect(cert.witness)
    checks.append(Check(prefix + "witness-cocycle", defect is None, witness=defect))
    diff = _first_difference(d2(cert.witness, cert.cocycle), omega)
    checks.append(Check(prefix + "witness-d2", diff is None, witness=diff))

    if cert.extension is None:
        checks.append(Check(prefix + "extension-axioms", None, note="extension absent"))
        checks.append(Check(prefix + "alpha-trivializes", None, note="partial certificate"))
        checks.append(Check(prefix + "alpha-restriction", None, note="partial certificate"))
        return
    axioms = _check_group_axioms(cert.extension, max_entries, seed, sample_size)
    axioms.name = prefix + axioms.name
    checks.append(axioms)

    if cert.alpha is None:
        checks.append(Check(prefix + "alpha-trivializes", None, note="partial certificate"))
        checks.append(Check(prefix + "alpha-restriction", None, note="partial certificate"))
        return
    ok, bad, info = verify_lift_primitive(
        cert.extension, omega, cert.alpha, max_entries, seed, sample_size
    )
    checks.append(Check(prefix + "alpha-trivializes", ok, witness=bad,
                        note=f"{info['mode']}, {info['checked']} tuples"))
    checks.append(_check_restriction(cert.extension, cert.alpha, max_entries, prefix))


def verify_certificate(cert: TrivializationCertificate, max_entries=None,
                       seed=0, sample_size=DEFAULT_SAMPLE_SIZE) -> VerificationReport:
    """Re-validate a certificate from scratch: the cocycle conditions of
    omega, c and b, d2(b, c) = omega, the group axioms of the extension,
    delta alpha = pi^* omega, and the kernel-restriction cocycle property.
    Every failure carries a witness tuple."""
    checks = []
    if cert.mode == "torsion":
        _verify_torsion_cert(cert, checks, max_entries, seed, sample_size)
        return VerificationReport(checks, cert.verification)

    omega = cert.omega
    defect = first_cocycle_defect(omega)
    checks.append(Check("omega-cocycle", defect is None, witness=defect))

    module = omega.coeffs
    group = omega.group
    q = group.order
    mt, jmap, pmap, smap = torsion_submodule(module)
    mfree = pmap.target
    p_omega = map_coefficients(omega, pmap.matrix, mfree)
    h = cert.stages["h"]
    scaled = Cochain(group, mfree, omega.degree,
                     {t: mfree.scale(q, v) for t, v in p_omega.values.items()})
    diff = _first_difference(coboundary(h.numerator), scaled)
    checks.append(Check("averaging-primitive", diff is None, witness=diff,
                        note=f"denominator {h.denominator}"))
    hbar = cert.stages["hbar"]
    modq = hbar.coeffs
    mismatch = None
    for tup in set(hbar.values) | set(h.numerator.values):
        if modq.reduce(h.numerator.evaluate(tup)) != hbar.evaluate(tup):
            mismatch = tup
            break
    checks.append(Check("hbar-reduction", mismatch is None, witness=mismatch))

    stage1 = cert.stages["stage1"]
    _verify_torsion_cert(stage1, checks, max_entries, seed, sample_size, prefix="stage1:")
    ext1 = stage1.extension

    eta = cert.stages["eta"]
    pi_omega = lift_cochain(ext1, omega, max_entries)
    diff = _first_difference(coboundary(eta),
                             map_coefficients(pi_omega, pmap.matrix, eta.coeffs))
    checks.append(Check("eta-primitive", diff is None, witness=diff))

    eta_tilde = cert.stages["eta_tilde"]
    beta = cert.stages["beta"]
    residual = sub_cochains(pi_omega, coboundary(eta_tilde))
    diff = _first_difference(map_coefficients(beta, jmap.matrix, residual.coeffs), residual)
    checks.append(Check("beta-defect", diff is None, witness=diff))
    defect = first_cocycle_defect(beta)
    checks.append(Check("beta-cocycle", defect is None, witness=defect))

    stage2 = cert.stages["stage2"]
    _verify_torsion_cert(stage2, checks, max_entries, seed, sample_size, prefix="stage2:")
    ext2 = stage2.extension

    if cert.alpha is None or ext2 is None:
        checks.append(Check("alpha-trivializes", None, note="partial certificate"))
        checks.append(Check("alpha-restriction", None, note="partial certificate"))
    else:
        ok, bad, info = verify_lift_primitive(
            ext2, omega, cert.alpha, max_entries, seed, sample_size,
            projector=cert.project,
        )
        checks.append(Check("alpha-trivializes", ok, witness=bad,
                            note=f"{info['mode']}, {info['checked']} tuples"))
        checks.append(_check_restriction(ext2, cert.alpha, max_entries))
    return VerificationReport(checks, cert.verification)

# -- serialization ---------------------------------------------------------


def _witness_to_json(b: Cochain) -> dict:
    hom: HomModule = b.coeffs
    labels = b.group.elements
    entries = []
    for tup in sorted(b.values):
        imgs = hom.images(b.values[tup])
        entries.append({
            "tuple": [labels[i] for i in tup],
            "matrix": [list(img) for img in imgs],
        })
    return {"degree": b.degree, "values": entries}


def _witness_from_json(data: dict, group, hom: HomModule) -> Cochain:
    label_to_idx = {lbl: i for i, lbl in enumerate(group.elements)}
    vals = {}
    for entry in data.get("values", []):
        tup = tuple(label_to_idx[lbl] for lbl in entry["tuple"])
        vals[tup] = hom.from_images([tuple(row) for row in entry["matrix"]])
    return Cochain(group, hom, data["degree"], vals)


def certificate_to_json(cert: TrivializationCertificate, embed_group=True) -> dict:
    inp = {
        "module": module_to_json(cert.module, embed_group=False),
        "degree": cert.degree,
        "omega": cochain_to_json(cert.omega),
    }
    if embed_group:
        inp["group"] = group_to_json(cert.group)
    data = {
        "format": "groupcoh-certificate",
        "mode": cert.mode,
        "input": inp,
        "partial": cert.partial,
        "verification": cert.verification,
        "alpha": cochain_to_json(cert.alpha) if cert.alpha is not None else None,
    }
    if cert.mode == "torsion":
        data["N"] = cert.exponent
        data["kernel"] = module_to_json(cert.kernel, embed_group=False)
        data["c"] = cochain_to_json(cert.cocycle)
        data["b"] = _witness_to_json(cert.witness)
        data["gamma"] = (
            {"order": cert.extension.order} if cert.extension is not None else None
        )
    else:
        st = cert.stages
        data["stages"] = {
            "h": {
                "numerator": cochain_to_json(st["h"].numerator),
                "denominator": st["h"].denominator,
            },
            "stage1": certificate_to_json(st["stage1"], embed_group=False),
            "eta": cochain_to_json(st["eta"]),
            "eta_tilde": cochain_to_json(st["eta_tilde"]),
            "stage2": certificate_to_json(st["stage2"], embed_group=False),
        }
    return data


def certificate_from_json(data: dict, group=None, max_entries=None) -> TrivializationCertificate:
    if group is None:
        group = group_from_json(data["input"]["group"])
    module = module_from_json(data["input"]["module"], group)
    omega = cochain_from_json(data["input"]["omega"], group, module)
    partial = data.get("partial", False)
    verification = data.get("verification", {})

    if data["mode"] == "torsion":
        kernel = module_from_json(data["kernel"], group)
        c = cochain_from_json(data["c"], group, kernel)
        hom = HomModule(kernel, module)
        b = _witness_from_json(data["b"], group, hom)
        ext = None
        alpha = None
        if data.get("gamma") is not None:
            ext = build_extension(kernel, c, max_entries)
            if data.get("alpha") is not None:
                coeffs = module_through_projection(ext, module)
                alpha = cochain_from_json(data["alpha"], ext, coeffs)
        return TrivializationCertificate(
            mode="torsion", omega=omega, exponent=data["N"], kernel=kernel,
            cocycle=c, witness=b, extension=ext, alpha=alpha, partial=partial,
            verification=verification,
        )

    st = data["stages"]
    mt, jmap, pmap, smap = torsion_submodule(module)
    mfree = pmap.target
    q = group.order
    h = RationalCochain(
        cochain_from_json(st["h"]["numerator"], group, mfree),
        st["h"]["denominator"],
    )
    stage1 = certificate_from_json(st["stage1"], group=group, max_entries=max_entries)
    ext1 = stage1.extension
    mfree_g = module_through_projection(ext1, mfree)
    eta = cochain_from_json(st["eta"], ext1, mfree_g)
    module_g = module_through_projection(ext1, module)
    eta_tilde = cochain_from_json(st["eta_tilde"], ext1, module_g)
    stage2 = certificate_from_json(st["stage2"], group=ext1, max_entries=max_entries)
    ext2 = stage2.extension
    alpha = None
    if data.get("alpha") is not None and ext2 is not None:
        module_g2 = module_through_projection(ext2, module_g)
        alpha = cochain_from_json(data["alpha"], ext2, module_g2)
    return TrivializationCertificate(
        mode="general", omega=omega, alpha=alpha, partial=partial,
        stages={
            "h": h, "hbar": stage1.omega, "stage1": stage1, "rho": stage1.alpha,
            "eta": eta, "eta_tilde": eta_tilde, "beta": stage2.omega,
            "stage2": stage2,
        },
        verification=verification,
    )


def save_certificate(cert: TrivializationCertificate, path: str):
    with open(path, "w") as fh:
        json.dump(certificate_to_json(cert), fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_certificate(path: str, max_entries=None) -> TrivializationCertificate:
    with open(path) as fh:
        return certificate_from_json(json.load(fh), max_entries=max_entries)
