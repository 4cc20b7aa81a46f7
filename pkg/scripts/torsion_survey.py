#!/usr/bin/env python3
"""Survey integral torsion in the three presentations of a symbol space.

Over the integers the Manin presentation, group cohomology, and surface
cohomology all share one free rank but can disagree in their torsion
subgroups; the interesting rows are the ones where some column is
nontrivial. The survey runs over congruence levels and, with --triangle,
over the full triangle groups with n = 4..8 where the n = 4 row shows the
famous Z/2.

Usage:
    python3 scripts/torsion_survey.py --max-level 20 --weights 2 4
    python3 scripts/torsion_survey.py --triangle
"""

import argparse

from heckesym.cohomology import h1, surface_h1
from heckesym.congruence import gamma0_cosets
from heckesym.modsym import PermCosets, manin_space, weight_module_for
from heckesym.rings import ZZ
from heckesym.triangle import TriangleSubgroup


def fmt_torsion(tors):
    if not tors:
        return "-"
    return ",".join(str(d) for d in tors)


def survey_row(label, cosets, k):
    space = manin_space(cosets, weight_module_for(cosets, ZZ, k))
    module = space.module
    manin = space.presentation
    group = h1(module)
    surface = surface_h1(module)
    print("%-12s k=%d  rank %2d   manin %-10s group %-10s surface %-10s"
          % (label, k, manin.rank(),
             fmt_torsion(manin.torsion()),
             fmt_torsion(group.torsion()),
             fmt_torsion(surface.torsion())))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-level", type=int, default=20)
    parser.add_argument("--weights", type=int, nargs="+", default=[2, 4])
    parser.add_argument("--triangle", action="store_true",
                        help="survey the full triangle groups n = 4..8 instead")
    args = parser.parse_args()

    if args.triangle:
        for n in range(4, 9):
            cosets = PermCosets(TriangleSubgroup.level_one(n))
            survey_row("triangle n=%d" % n, cosets, 2)
        return

    for N in range(1, args.max_level + 1):
        for k in args.weights:
            survey_row("gamma0:%d" % N, gamma0_cosets(N), k)


if __name__ == "__main__":
    main()
