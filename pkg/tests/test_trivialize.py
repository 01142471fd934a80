import itertools
import json
import random

import pytest

from groupcoh import (
    Cochain,
    GModule,
    build_witness,
    builtin_group,
    certificate_from_json,
    certificate_to_json,
    coboundary,
    cochain_from_function,
    cyclic_group,
    d2,
    first_cocycle_defect,
    is_cocycle,
    lift_cochain,
    scale_cochain,
    solve_coboundary,
    torsion_exponent,
    trivial_module,
    trivialize_general,
    trivialize_torsion,
    universal_kernel,
    verify_certificate,
)
from groupcoh.cochains import coboundary_value, nonid_tuples
from groupcoh.errors import (
    DegreeTooLow,
    ExponentMismatch,
    NonTorsionValue,
    NotACocycle,
)
from groupcoh.trivialize import verify_lift_primitive


def z2_generator_cocycle():
    g = cyclic_group(2)
    m = trivial_module(g, [2])
    return Cochain(g, m, 2, {(1, 1): (1,)})


# -- torsion_exponent ------------------------------------------------------


def test_exponent_zero_cochain():
    g = cyclic_group(2)
    m = trivial_module(g, [2])
    assert torsion_exponent(Cochain(g, m, 2)) == 1


def test_exponent_single_value():
    assert torsion_exponent(z2_generator_cocycle()) == 2


def test_exponent_lcm():
    g = cyclic_group(2)
    m = trivial_module(g, [6])
    f = Cochain(g, m, 1, {(1,): (3,)})
    f2 = Cochain(g, m, 2, {(1, 1): (2,)})
    assert torsion_exponent(f) == 2
    assert torsion_exponent(f2) == 3
    mixed = Cochain(g, m, 2, {(1, 1): (1,)})
    assert torsion_exponent(mixed) == 6


def test_exponent_rejects_free_value():
    g = cyclic_group(2)
    m = trivial_module(g, [0])
    f = Cochain(g, m, 2, {(1, 1): (1,)})
    with pytest.raises(NonTorsionValue) as exc:
        torsion_exponent(f)
    assert exc.value.witness == (1, 1)


# -- universal_kernel ------------------------------------------------------


def test_universal_kernel_z2():
    g = cyclic_group(2)
    a, c = universal_kernel(g, 2)
    assert list(a.factors) == [2]
    # t . x_{t,t} = x_{tt,t} - x_{t,tt} + x_{t,t} = x_{t,t} (other terms hit
    # the identity and vanish), so the action is trivial
    assert a.act(1, (1,)) == (1,)
    assert c.evaluate((1, 1)) == (1,)
    assert is_cocycle(c)


def test_universal_kernel_trivial_group():
    g = cyclic_group(1)
    a, c = universal_kernel(g, 5)
    assert a.dim == 0
    assert c.is_zero()


def test_universal_kernel_s3():
    g = builtin_group("symmetric:3")
    a, c = universal_kernel(g, 6)
    assert a.dim == 25
    assert all(d == 6 for d in a.factors)
    assert is_cocycle(c)


def test_universal_kernel_action_is_action():
    g = builtin_group("cyclic:2*cyclic:2")
    a, c = universal_kernel(g, 2)
    # (gh).x = g.(h.x) checked on all generators (GModule validation also
    # covers this; re-assert explicitly)
    for x in range(a.dim):
        e = a.basis_vector(x)
        for i in range(g.order):
            for j in range(g.order):
                assert a.act(g.mul(i, j), e) == a.act(i, a.act(j, e))


# -- build_witness ---------------------------------------------------------


def test_witness_z2():
    w = z2_generator_cocycle()
    a, c = universal_kernel(w.group, 2)
    b = build_witness(w, a, c)
    assert b.degree == 0
    hom = b.coeffs
    assert hom.images(b.evaluate(())) == [(1,)]
    assert is_cocycle(b)
    assert d2(b, c) == w


def test_witness_degree_too_low():
    g = cyclic_group(2)
    m = trivial_module(g, [2])
    f = Cochain(g, m, 1, {(1,): (1,)})
    a, c = universal_kernel(g, 2)
    with pytest.raises(DegreeTooLow):
        build_witness(f, a, c)


def test_witness_exponent_mismatch():
    g = cyclic_group(2)
    m = trivial_module(g, [4])
    w = Cochain(g, m, 2, {(1, 1): (1,)})  # order 4 value
    a, c = universal_kernel(g, 2)  # exponent-2 kernel cannot absorb it
    with pytest.raises(ExponentMismatch):
        build_witness(w, a, c)


def test_witness_d2_roundtrip_z3():
    g = cyclic_group(3)
    m = trivial_module(g, [3])
    vals = {(i, j): (1,) for i in (1, 2) for j in (1, 2) if i + j >= 3}
    w = Cochain(g, m, 2, vals)
    assert is_cocycle(w)
    a, c = universal_kernel(g, 3)
    b = build_witness(w, a, c)
    assert is_cocycle(b)
    assert d2(b, c) == w


def test_witness_d2_roundtrip_degree3():
    g = cyclic_group(2)
    m = trivial_module(g, [2])
    w = Cochain(g, m, 3, {(1, 1, 1): (1,)})
    assert is_cocycle(w)
    a, c = universal_kernel(g, 2)
    b = build_witness(w, a, c)
    assert b.degree == 1
    assert is_cocycle(b)
    assert d2(b, c) == w


# -- trivialize_torsion ----------------------------------------------------


def test_trivialize_smallest():
    cert = trivialize_torsion(z2_generator_cocycle())
    assert cert.exponent == 2
    assert cert.extension.order == 4
    assert cert.verification == {"mode": "exhaustive", "seed": 0, "checked": 16}
    assert verify_certificate(cert).ok()


def test_trivialize_rejects_non_cocycle():
    g = builtin_group("cyclic:2*cyclic:2")
    m = trivial_module(g, [2])
    bad = Cochain(g, m, 2, {(1, 2): (1,)})
    with pytest.raises(NotACocycle):
        trivialize_torsion(bad)


def test_trivialize_degree_too_low():
    g = cyclic_group(2)
    m = trivial_module(g, [2])
    f = Cochain(g, m, 1, {(1,): (1,)})
    with pytest.raises(DegreeTooLow):
        trivialize_torsion(f)


def test_trivialize_coboundary_input():
    # already-trivial classes still get a valid certificate, and the
    # base-level solver finds a primitive without any extension
    g = cyclic_group(3)
    m = trivial_module(g, [3])
    u = Cochain(g, m, 1, {(1,): (1,)})
    w = coboundary(u)
    assert not w.is_zero()
    cert = trivialize_torsion(w)
    assert verify_certificate(cert).ok()
    assert solve_coboundary(w) is not None


def test_trivialize_z3_generator():
    g = cyclic_group(3)
    m = trivial_module(g, [3])
    vals = {(i, j): (1,) for i in (1, 2) for j in (1, 2) if i + j >= 3}
    w = Cochain(g, m, 2, vals)
    cert = trivialize_torsion(w)
    assert cert.exponent == 3
    assert list(cert.kernel.factors) == [3, 3, 3, 3]
    assert cert.extension.order == 243
    assert cert.verification["mode"] == "exhaustive"
    assert cert.verification["checked"] == 243 ** 2


def test_trivialize_nontrivial_action():
    # Z/2 acting on Z/4 by negation
    g = cyclic_group(2)
    m = GModule(g, [4], [[[1]], [[-1]]])
    found = None
    for v in range(1, 4):
        w = Cochain(g, m, 2, {(1, 1): (v,)})
        if first_cocycle_defect(w) is None:
            found = w
            break
    assert found is not None
    cert = trivialize_torsion(found)
    assert verify_certificate(cert).ok()


def test_trivialize_partial_when_kernel_huge():
    g = builtin_group("symmetric:3")
    m = trivial_module(g, [6])
    w = Cochain(g, m, 2)
    # exponent 1 keeps this small; force a big kernel case via a real value
    vals = {}
    # bilinear-form style cocycle on the cyclic 3-subgroup is fiddly; use a
    # coboundary so cocycle-ness is automatic
    u = Cochain(g, m, 1, {(i,): (i,) for i in range(1, 6)})
    w = coboundary(u)
    if w.is_zero():
        pytest.skip("chosen coboundary degenerated")
    cert = trivialize_torsion(w)
    assert cert.partial
    assert cert.alpha is None and cert.extension is None
    # witness pair is still fully checked
    report = verify_certificate(cert)
    assert not any(c.ok is False for c in report.checks)
    assert report.ok(allow_partial=True)
    assert not report.ok(allow_partial=False)


def test_sampled_verification_mode():
    # shrink the resource limit so the 16-pair sweep gets sampled instead
    w = z2_generator_cocycle()
    cert = trivialize_torsion(w, max_entries=10**9)  # build everything
    ok, bad, info = verify_lift_primitive(
        cert.extension, w, cert.alpha, max_entries=10, seed=5, sample_size=50
    )
    assert ok and info == {"mode": "sampled", "seed": 5, "checked": 50}


# -- trivialize_general ----------------------------------------------------


def h4_z2_generator():
    g = cyclic_group(2)
    m = trivial_module(g, [0])
    return Cochain(g, m, 4, {(1, 1, 1, 1): (1,)})


def test_general_degree_too_low():
    g = cyclic_group(2)
    m = trivial_module(g, [0])
    w = Cochain(g, m, 2, {(1, 1): (1,)})
    with pytest.raises(DegreeTooLow):
        trivialize_general(w)


def test_general_h4_z():
    w = h4_z2_generator()
    assert is_cocycle(w)
    assert solve_coboundary(w) is None  # genuinely nontrivial class
    cert = trivialize_general(w)
    assert cert.total_order() == 4
    assert cert.verification["checked"] == 256
    assert cert.stages["beta"].is_zero()  # no torsion part in Z
    assert verify_certificate(cert).ok()
    # the final primitive really trivializes the composite lift
    ext2 = cert.stages["stage2"].extension
    for tup in nonid_tuples(ext2.order, 4):
        lhs = coboundary_value(cert.alpha, tup)
        rhs = w.evaluate(cert.project(tup))
        assert cert.alpha.coeffs.reduce(lhs) == cert.alpha.coeffs.reduce(rhs)


def test_general_torsion_module_degenerates():
    # M pure torsion: free stage is vacuous, stage 2 does all the work
    g = cyclic_group(2)
    m = trivial_module(g, [2])
    w = Cochain(g, m, 3, {(1, 1, 1): (1,)})
    cert = trivialize_general(w)
    assert cert.stages["h"].numerator.is_zero()
    assert cert.stages["stage1"].extension.order == g.order  # trivial stage
    assert verify_certificate(cert).ok()
    # agrees with the direct torsion driver on the final contract
    direct = trivialize_torsion(w)
    assert verify_certificate(direct).ok()


def test_general_zero_cocycle():
    g = cyclic_group(2)
    m = trivial_module(g, [0, 2])
    cert = trivialize_general(Cochain(g, m, 3))
    assert cert.total_order() == g.order  # both extensions trivial
    assert cert.alpha.is_zero()
    assert verify_certificate(cert).ok()


def test_general_mixed_module():
    # M = Z-sign + Z/2 over Z/2, with a cocycle touching both parts
    g = cyclic_group(2)
    m = GModule(g, [0, 2], [[[1, 0], [0, 1]], [[-1, 0], [0, 1]]])
    u = Cochain(g, m, 2, {(1, 1): (1, 0)})
    w = coboundary(u)  # (t,t,t) -> (-2, 0)
    assert not w.is_zero()
    w = Cochain(
        g, m, 3, {(1, 1, 1): m.add(w.evaluate((1, 1, 1)), (0, 1))}
    )
    if first_cocycle_defect(w) is not None:
        w = coboundary(u)
    cert = trivialize_general(w)
    assert verify_certificate(cert).ok()


# -- verify_certificate ----------------------------------------------------


def test_verify_detects_corrupted_alpha():
    cert = trivialize_torsion(z2_generator_cocycle())
    data = certificate_to_json(cert)
    entry = data["alpha"]["values"][0]
    entry["value"] = [(entry["value"][0] + 1) % 2]
    bad = certificate_from_json(data)
    report = verify_certificate(bad)
    assert not report.ok()
    failing = [c for c in report.checks if c.ok is False]
    assert failing and failing[0].witness is not None


def test_verify_detects_corrupted_witness():
    cert = trivialize_torsion(z2_generator_cocycle())
    data = certificate_to_json(cert)
    data["b"]["values"][0]["matrix"][0][0] ^= 1
    bad = certificate_from_json(data)
    report = verify_certificate(bad)
    assert any(c.name == "witness-d2" and c.ok is False for c in report.checks)


def test_certificate_json_roundtrip():
    cert = trivialize_torsion(z2_generator_cocycle())
    data = certificate_to_json(cert)
    again = certificate_from_json(data)
    assert verify_certificate(again).ok()
    assert certificate_to_json(again) == data


def test_general_certificate_json_roundtrip():
    cert = trivialize_general(h4_z2_generator())
    data = certificate_to_json(cert)
    again = certificate_from_json(data)
    assert verify_certificate(again).ok()
    assert certificate_to_json(again) == data


def test_certificate_json_deterministic():
    w = z2_generator_cocycle()
    d1 = json.dumps(certificate_to_json(trivialize_torsion(w)), sort_keys=True)
    d2_ = json.dumps(certificate_to_json(trivialize_torsion(w)), sort_keys=True)
    assert d1 == d2_
