"""Seeded fault injection for benchmark scenes.

The shipped corpus programs are clean; corrupting random edit sites
produces faulty-but-executable inputs in the same family of mistakes
the repair search targets, so corrupt-then-repair round trips measure
end-to-end correction strength.
"""
from __future__ import annotations

import random

from .geometry import Facing
from .lang import CONSTANT, Program, apply_edit, edit_sites
from .repair import ZERO_ESCAPE

# Constants are scaled by a factor in this range, with an occasional
# sign flip; a few corruptions per scene yield Table-scale error counts
# on the shipped corpus (whose object volumes are kept small enough that
# displaced objects stay repairable under the stay-close-to-original
# objective).
FACTOR_RANGE = (1.5, 4.0)
SIGN_FLIP_PROB = 0.25

_CARDINALS = (Facing.X_NEG, Facing.X_POS, Facing.Y_NEG, Facing.Y_POS)


def inject_errors(program: Program, rng: random.Random, k: int) -> Program:
    """Corrupt k distinct edit sites of an executable program.

    Constants are multiplied by a random factor in FACTOR_RANGE (sign
    flipped with probability SIGN_FLIP_PROB; exactly-zero constants get
    an additive kick instead since scaling zero changes nothing).
    Directions are re-rolled uniformly over the other three cardinals.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sites = edit_sites(program)
    if not sites:
        raise ValueError("program has no edit sites to corrupt")
    chosen = sorted(rng.sample(range(len(sites)), min(k, len(sites))))
    corrupted = program
    for idx in chosen:
        site = sites[idx]
        if site.kind == CONSTANT:
            factor = rng.uniform(*FACTOR_RANGE)
            if rng.random() < SIGN_FLIP_PROB:
                factor = -factor
            base = site.value
            new_value = base * factor if base != 0.0 else ZERO_ESCAPE * factor
            corrupted = apply_edit(corrupted, site, new_value)
        else:
            options = [c for c in _CARDINALS if c is not site.value]
            corrupted = apply_edit(corrupted, site, rng.choice(options))
    return corrupted
