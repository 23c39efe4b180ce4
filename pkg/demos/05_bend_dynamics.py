"""Wavepackets negotiating a 60-degree bend.

Three runs, all starting from the same construction (zero-mode transverse
profile, Gaussian envelope, right-moving branch of the crossing):

  * type II between topologically distinct materials: the packet turns the
    corner almost losslessly;
  * type I between distinct materials at the tuned coupling: also passes;
  * type I between identical materials at the tuned coupling: mostly
    reflected at the corner.

Run:  python3 demos/05_bend_dynamics.py   (about half a minute)
"""

from edgelab.dynamics import (
    DomainSpec,
    build_domain,
    evolve,
    initial_wavepacket,
    make_bend_partition,
    rho_bound,
    transmission,
)
from edgelab.hamiltonian import HoppingProfile
from edgelab.lattice import InterfaceKind
from edgelab.transfer import matching_c_star


def run(tag, kind, profile, extent, origin, t_final, samples=4):
    spec = DomainSpec(kind, extent, profile, bend=(8, +1), origin=origin)
    domain = build_domain(spec)
    state = initial_wavepacket(domain, profile, center_m=-12.0, width=8.0, direction=+1)
    partition = make_bend_partition(domain)
    H = domain.hamiltonian
    dt = 0.1 / rho_bound(H)
    steps = int(round(t_final / samples / dt))
    print(f"{tag} (dt = {dt:.2e}):")
    for _ in range(samples):
        state = evolve(state, H, dt, steps)
        tr, rf, rs = transmission(state, partition)
        print(f"  t = {state.time:4.2f}: transmitted {tr:.3f}, reflected {rf:.3f}, "
              f"residual {rs:.3f}")
    print()


mixed = HoppingProfile(60, 60, 30, -30, 50.0)
run("type II, distinct materials, c = 50", InterfaceKind.TYPE_II, mixed,
    (52, 86), (-32, -20), 1.8)

tuned_mixed = mixed.with_c(matching_c_star(mixed))
run(f"type I, distinct materials, tuned c* = {tuned_mixed.c:.3f}",
    InterfaceKind.TYPE_I, tuned_mixed, (90, 60), (-32, -30), 1.4)

same = HoppingProfile(60, 60, 30, 30, 50.0)
tuned_same = same.with_c(matching_c_star(same))
run(f"type I, identical materials, tuned c* = {tuned_same.c:.3f}",
    InterfaceKind.TYPE_I, tuned_same, (90, 60), (-32, -30), 1.4)
