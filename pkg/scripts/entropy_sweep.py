"""Entropy gap along a path from a stabilizer window to a random one.

For each t in [0, 1] the window is cos(t*pi/2)*phi + sin(t*pi/2)*psi (normalized) and
rho is its own projector. The gap S_G - G(1) is zero at t = 0 and positive elsewhere
for strictly concave G. Output is CSV on stdout.

    python3 scripts/entropy_sweep.py Z3 --steps 21 -G=-t*log(t) -G=t-t^2
"""

import argparse
import csv
import sys

import numpy as np

from stabforge.groups import parse_group
from stabforge.stabilizer import enumerate_states, sstate_synthesize
from stabforge.wehrl import entropy, husimi, parse_g
from stabforge.weyl import WaveFunction, pure, random_wavefunction


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("group")
    ap.add_argument("--state", type=int, default=0, help="index into the stabilizer enumeration")
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-G", dest="g", action="append", default=None)
    args = ap.parse_args(argv)

    A = parse_group(args.group)
    Gs = [parse_g(s) for s in (args.g or ["-t*log(t)", "t-t^2"])]
    phi = sstate_synthesize(enumerate_states(A)[args.state].descriptor).amplitudes
    psi = random_wavefunction(A, np.random.default_rng(args.seed)).amplitudes

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["t", "G-id", "entropy", "gap"])
    for t in np.linspace(0, 1, args.steps):
        v = np.cos(t * np.pi / 2) * phi + np.sin(t * np.pi / 2) * psi
        win = WaveFunction(A, v / np.linalg.norm(v))
        u = husimi(win, pure(win))
        for G in Gs:
            E = entropy(G, u)
            w.writerow([f"{t:.4f}", G.name, f"{E:.12f}", f"{E - float(G(1.0)):.3e}"])


if __name__ == "__main__":
    main()
