import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

CRITERIA = {
    1: "symbol dims = group cohomology = surface cohomology over Q "
       "(level <= 30, weights 2/4/6, under 60s)",
    2: "integral presentations share ranks, torsion only at 2 and 3 "
       "(level <= 20, weights 2/4)",
    3: "weight-2 cuspidal dim = 2 * genus (six levels, under 10s)",
    4: "cuspidal dim = 2 * classical cusp form count "
       "(level <= 20, weights up to 8, plus level 1 weight 12)",
    5: "eigenvalue anchors: tau(2/3/5) and the level-11 curve point counts "
       "(under 30s)",
    6: "degenerate, three-term, and invariance relations on 200 random "
       "paths per space, zero failures",
    7: "six-term exactness + parabolic rank identity on 50 random "
       "subgroups over Q, F2, F3, F5 (under 120s)",
    8: "n=4 witness: Z/2 over the integers, kernel = elliptic span over "
       "F2, isomorphism over Q",
    9: "Hecke commutation (p <= 13), cuspidal invariance, Eisenstein "
       "eigenvalue p+1 across the rational sweep (exact on squarefree "
       "levels, divisibility elsewhere)",
}

_RANK = {"passed": 0, "skipped": 1, "error": 2, "failed": 2}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    seen = {}
    for outcome in ("passed", "skipped", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            m = re.search(r"test_criterion_(\d+)", nodeid)
            if not m:
                continue
            num = int(m.group(1))
            if _RANK[outcome] > _RANK.get(seen.get(num, "passed"), 0):
                seen[num] = outcome
            seen.setdefault(num, outcome)
    if not seen:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(seen):
        status = seen[num]
        label = "PASS" if status == "passed" else status.upper()
        terminalreporter.write_line(
            "criterion %d: %s - %s" % (num, label, CRITERIA.get(num, ""))
        )
