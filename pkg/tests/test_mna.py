import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cqed_circuits import InvalidParameterError, TopologyError
from cqed_circuits.accircuit import (
    MnaSystem,
    ac_solve,
    natural_frequencies,
    parse_netlist,
    transmission_sweep,
)

KCL_TOL = 1e-9


def test_resistive_divider_exact():
    net = parse_netlist("V1 in 0 AC 2\nR1 in out 3k\nR2 out 0 1k\n.port out out 0\n")
    sol = ac_solve(net, 1e6)
    assert sol.voltage("out") == 0.5
    assert sol.kcl_residual() < KCL_TOL


def test_rc_low_pass_exact():
    r, c = 1e3, 1e-9
    net = parse_netlist(f"V1 in 0 AC 1\nR1 in out {r!r}\nC1 out 0 {c!r}\n.port out out 0\n")
    for f in (1e3, 1 / (2 * math.pi * r * c), 1e7):
        w = 2 * math.pi * f
        sol = ac_solve(net, w)
        expected = 1 / (1 + 1j * w * r * c)
        assert abs(sol.voltage("out") - expected) <= 4 * np.finfo(float).eps * abs(expected)
        assert sol.kcl_residual() < KCL_TOL
    spec = transmission_sweep(net, "out", [1 / (2 * math.pi * r * c)])
    assert spec.magnitude[0] == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert spec.phase[0] == pytest.approx(-math.pi / 4, rel=1e-14)


def test_source_resistance_is_series():
    explicit = parse_netlist("V1 a 0 AC 1\nRs a b 50\nRl b 0 50\n.port p b 0\n")
    internal = parse_netlist("V1 b 0 AC 1 50\nRl b 0 50\n.port p b 0\n")
    assert ac_solve(explicit, 1e9).voltage("b") == pytest.approx(ac_solve(internal, 1e9).voltage("b"))


def test_inductor_branch_current():
    net = parse_netlist("V1 a 0 AC 1\nL1 a 0 1u\n")
    w = 1e6
    sol = ac_solve(net, w)
    assert sol.branch_currents["L1"] == pytest.approx(1 / (1j * w * 1e-6))
    assert sol.kcl_residual() < KCL_TOL


def test_floating_node_rejected():
    net = parse_netlist("V1 a 0 AC 1\nR1 a 0 1k\nC1 x y 1p\n")
    with pytest.raises(TopologyError, match="x, y"):
        ac_solve(net, 1e6)


def test_singular_system_rejected():
    net = parse_netlist("V1 a 0 AC 1\nV2 a 0 AC 2\nR1 a 0 1k\n.port p a 0\n")
    with pytest.raises(TopologyError, match="singular"):
        transmission_sweep(net, "p", [1e6])


def test_api_guards():
    net = parse_netlist("R1 a 0 1k\n.port p a 0\n")
    with pytest.raises(InvalidParameterError, match="no source"):
        ac_solve(net, 1.0)
    net = parse_netlist("V1 a 0 AC 1\nR1 a 0 1k\n.port p a 0\n")
    with pytest.raises(InvalidParameterError):
        ac_solve(net, 0.0)
    with pytest.raises(InvalidParameterError, match="port"):
        transmission_sweep(net, "q", [1.0])
    with pytest.raises(InvalidParameterError, match="empty"):
        transmission_sweep(net, "p", [])


def test_lc_natural_frequency():
    l, c = 2e-9, 3e-13
    net = parse_netlist(f"L1 a 0 {l!r}\nC1 a 0 {c!r}\n")
    s = natural_frequencies(net)
    np.testing.assert_allclose(s.imag, [-1 / math.sqrt(l * c), 1 / math.sqrt(l * c)], rtol=1e-12)
    assert np.all(np.abs(s.real) < 1e-6 * abs(s.imag))


def test_rlc_damping():
    l, c, r = 1e-9, 1e-12, 1e3
    net = parse_netlist(f"L1 a 0 {l!r}\nC1 a 0 {c!r}\nR1 a 0 {r!r}\n")
    s = natural_frequencies(net)
    assert np.allclose(s.real, -1 / (2 * r * c), rtol=1e-9)


def _two_port_z(net, a, b, w):
    """Open-circuit impedance matrix seen between nodes a, b and ground."""
    system = MnaSystem(net)
    ia, ib = system.node_index[a], system.node_index[b]
    z = np.empty((2, 2), complex)
    for col, inj in enumerate((ia, ib)):
        rhs = np.zeros(system.size, complex)
        rhs[inj] = 1.0  # unit current injected into the node
        x = system.solve_vector(w, rhs)
        z[:, col] = x[[ia, ib]]
    return z


def test_t_network_equals_mutual_inductance():
    l1, l2, m = 3e-9, 5e-9, 1e-9
    t_net = parse_netlist(f"La a x {l1 - m!r}\nLb b x {l2 - m!r}\nLm x 0 {m!r}\n")
    k = m / math.sqrt(l1 * l2)
    k_net = parse_netlist(f"L1 a 0 {l1!r}\nL2 b 0 {l2!r}\nK1 L1 L2 {k!r}\n")
    w = 2 * math.pi * 1e9
    zt, zk = _two_port_z(t_net, "a", "b", w), _two_port_z(k_net, "a", "b", w)
    np.testing.assert_allclose(zt, zk, rtol=1e-12)
    np.testing.assert_allclose(zk, 1j * w * np.array([[l1, m], [m, l2]]), rtol=1e-12)


def test_coupled_opposite_signs_rejected():
    net = parse_netlist("V1 a 0 AC 1\nL1 a 0 1n\nL2 a 0 -1n\nK1 L1 L2 0.5\n")
    with pytest.raises(InvalidParameterError, match="opposite sign"):
        ac_solve(net, 1e9)


LADDER = """\
R1 a 0 {r1}
C1 a b {c1}
L1 b 0 {l1}
R2 b c {r2}
C2 c 0 {c2}
L2 c d {l2}
R3 d 0 {r3}
"""


def _reciprocal_pair(vals, rs):
    body = LADDER.format(**vals)
    forward = parse_netlist(body + f"V1 a 0 AC 1 {rs!r}\nRp d 0 {rs!r}\n.port p d 0\n")
    reverse = parse_netlist(body + f"V1 d 0 AC 1 {rs!r}\nRp a 0 {rs!r}\n.port p a 0\n")
    return forward, reverse


positive = st.floats(min_value=0.1, max_value=10.0)


@settings(max_examples=50, deadline=None)
@given(r=st.tuples(positive, positive, positive), lc=st.tuples(positive, positive, positive, positive),
       f=st.floats(min_value=1e8, max_value=1e10))
def test_reciprocity(r, lc, f):
    vals = dict(r1=r[0] * 100, r2=r[1] * 10, r3=r[2] * 100,
                c1=lc[0] * 1e-12, c2=lc[1] * 1e-12, l1=lc[2] * 1e-9, l2=lc[3] * 1e-9)
    forward, reverse = _reciprocal_pair(vals, 50.0)
    a = transmission_sweep(forward, "p", [f]).magnitude[0]
    b = transmission_sweep(reverse, "p", [f]).magnitude[0]
    assert abs(a - b) <= 1e-12 * max(a, b)


@settings(max_examples=50, deadline=None)
@given(r=st.tuples(positive, positive, positive), lc=st.tuples(positive, positive, positive, positive),
       w=st.floats(min_value=1e8, max_value=1e11))
def test_kcl_on_random_ladders(r, lc, w):
    vals = dict(r1=r[0] * 100, r2=r[1] * 10, r3=r[2] * 100,
                c1=lc[0] * 1e-12, c2=lc[1] * 1e-12, l1=lc[2] * 1e-9, l2=lc[3] * 1e-9)
    forward, _ = _reciprocal_pair(vals, 50.0)
    assert ac_solve(forward, w).kcl_residual() < KCL_TOL


def test_sweep_matches_pointwise_solve():
    net = parse_netlist("V1 in 0 AC 0.5 50\nC1 in a 1p\nL1 a 0 1n\nC2 a 0 2p\nR1 a 0 1k\n.port p a 0\n")
    grid = np.linspace(1e9, 5e9, 7)
    spec = transmission_sweep(net, "p", grid)
    for f, mag in zip(grid, spec.magnitude):
        assert mag == pytest.approx(abs(ac_solve(net, 2 * math.pi * f).voltage("a")) / 0.5, rel=1e-14)
