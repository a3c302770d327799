import math

import numpy as np
import pytest

from blockshift_lab.blockshift import BlockShiftSpec
from blockshift_lab.seqcore import Constant, MobiusRational, Table


def random_table(rng, span=4, min_mod=0.5, max_mod=2.0):
    """Table of nonzero complex values over [-span, span]."""
    entries = {}
    for n in range(-span, span + 1):
        mod = rng.uniform(min_mod, max_mod)
        arg = rng.uniform(0.0, 2.0 * math.pi)
        entries[n] = mod * complex(math.cos(arg), math.sin(arg))
    return Table(entries)


def random_diag_table(rng, span=4, max_mod=1.5):
    entries = {
        n: complex(rng.uniform(-max_mod, max_mod), rng.uniform(-max_mod, max_mod))
        for n in range(-span, span + 1)
    }
    return Table(entries)


def random_td_spec(rng, span=4):
    """Random reciprocal-class spec with bounded weights and diagonal."""
    return BlockShiftSpec.t_class(random_table(rng, span), random_diag_table(rng, span))


def random_general_spec(rng, span=4):
    return BlockShiftSpec(
        w=random_table(rng, span),
        v=random_table(rng, span),
        d=random_diag_table(rng, span),
    )


def random_unitary(rng, size):
    ginibre = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    q, r = np.linalg.qr(ginibre)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)


def mobius_rational_spec():
    """Unimodular rational weights with unit coupling, the workhorse example."""
    return BlockShiftSpec.t_class(MobiusRational(0.5, 0.5, 1j), Constant(1.0))


def reflected_ratio_table(span=45, a=0.3, b=0.7):
    """t_n = sqrt(|(n+a)/(n+b)|) with a+b=1, reflection-paired under n -> -(n+1)."""
    return Table({n: complex(math.sqrt(abs((n + a) / (n + b)))) for n in range(-span, span + 1)})
