#!/usr/bin/env python3
"""Regenerates the bundled scheme specs in specs/."""
import json
import sys
from fractions import Fraction
from pathlib import Path


def q(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def pt(x):
    return [q(x), q(x), True, True]


def spec(name, window, levels, **extra):
    out = {"name": name, "window": [q(window[0]), q(window[1])], "levels": levels,
           "measure_bounds": ["0"] * len(levels)}
    out.update(extra)
    return out


def cantor_endpoint_tree(depth):
    """Level n groups the depth-`depth` endpoints by their depth-n interval."""
    def intervals(n):
        cur = [(Fraction(0), Fraction(1))]
        for _ in range(n):
            nxt = []
            for a, b in cur:
                t = (b - a) / 3
                nxt += [(a, a + t), (b - t, b)]
            cur = nxt
        return cur

    points = sorted({e for iv in intervals(depth) for e in iv})
    levels = []
    for n in range(1, depth + 1):
        level = []
        for a, b in intervals(n):
            level.append([pt(x) for x in points if a <= x <= b])
        levels.append(level)
    return levels


def main(outdir):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    farey = sorted({Fraction(p, d) for d in range(1, 5) for p in range(0, d + 1)})
    specs = {
        "zero.json": spec("A = {0}", (-4, 4), [[[pt(0)]]]),
        "zero_one.json": spec("A = {0, 1}", (-3, 4), [[[pt(0)], [pt(1)]]]),
        "rationals.json": spec("rationals of denominator <= 4 in [0,1], ten levels", (-1, 2),
                               [[[pt(x)] for x in farey] for _ in range(10)]),
        "cantor.json": spec("depth-8 Cantor endpoint tree", (-1, 2), cantor_endpoint_tree(8)),
        "jarnik_zero.json": spec("G_delta part {0}", (-1, 1), [],
                                 open_levels=[[[q(-Fraction(1, 2**n)), q(Fraction(1, 2**n)),
                                                False, False]] for n in range(1, 25)]),
        "empty.json": spec("A empty", (0, 1), []),
    }
    for name, s in specs.items():
        (out / name).write_text(json.dumps(s, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "specs")
