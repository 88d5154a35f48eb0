"""Shared fixture builders for synthetic regions and datasets."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from ineqnet import Occupation, RegionSample

settings.register_profile("ineqnet", deadline=None)
settings.load_profile("ineqnet")

#: Evenly spaced base incomes; occupation samples are offsets of this.
#: With this spread, exact Mann-Whitney on 10-vs-10 yields no dominance
#: for offset gaps below 30 and dominance for gaps above 30.
BASE_INCOMES = [float(v) for v in range(0, 100, 10)]

ALL_OCCUPATIONS = sorted(Occupation, key=lambda o: o.value)

#: Offsets giving exactly 82 dominance pairs out of C(14,2)=91: two
#: clusters of mutually non-dominant occupations, {4, 3}, kill
#: C(4,2)+C(3,2)=9 pairs.
OFFSETS_82 = [0, 2, 4, 6, 1000, 1002, 1004,
              2000, 3000, 4000, 5000, 6000, 7000, 8000]

#: Offsets giving exactly 47 dominance pairs: a 9-cluster (36 killed), a
#: 4-cluster (6 killed) and a singleton overlapping two of the 4-cluster
#: members (2 killed), 44 in total.
OFFSETS_47 = [0, 1, 2, 3, 4, 5, 6, 7, 8, 1000, 1004, 1024, 1028, 1052]


def region_from_offsets(offsets, region_id="R", base=BASE_INCOMES) -> RegionSample:
    samples = {
        occ: [b + off for b in base]
        for occ, off in zip(ALL_OCCUPATIONS, offsets)
    }
    return RegionSample(
        region_id=region_id,
        samples=samples,
        head_count=sum(len(v) for v in samples.values()),
    )


def random_region(rng: np.random.Generator, region_id="R") -> RegionSample:
    """A small random region: 3 occupations, 5-10 incomes each."""
    occs = rng.choice(len(ALL_OCCUPATIONS), size=3, replace=False)
    samples = {}
    for i in occs:
        n = int(rng.integers(5, 11))
        scale = float(rng.uniform(10, 1000))
        samples[ALL_OCCUPATIONS[i]] = list(rng.uniform(0, scale, size=n))
    return RegionSample(
        region_id=region_id,
        samples=samples,
        head_count=sum(len(v) for v in samples.values()),
    )


@pytest.fixture
def region_82() -> RegionSample:
    return region_from_offsets(OFFSETS_82, "dense-region")


@pytest.fixture
def region_47() -> RegionSample:
    return region_from_offsets(OFFSETS_47, "sparse-region")


def write_archetype_csv(path, n_regions=20, rows_per_occ=30, seed=7) -> str:
    """A dataset whose first region is the low-Gini/high-density archetype.

    Region R00 has tight within-occupation spreads with small
    between-occupation offsets (every pair separated, so density 1, while
    overall incomes stay nearly equal). The remaining regions draw every
    occupation from one wide lognormal, giving high Gini and almost no
    dominance. Returns the engineered region id.
    """
    rng = np.random.default_rng(seed)
    lines = ["household_id,province,occupation,annual_income"]
    hid = 0
    for r in range(n_regions):
        region = f"R{r:02d}"
        for k, occ in enumerate(ALL_OCCUPATIONS):
            if r == 0:
                incomes = 100000.0 + 800.0 * k + rng.uniform(-5, 5, size=rows_per_occ)
            else:
                incomes = rng.lognormal(mean=11.0, sigma=1.0, size=rows_per_occ)
            for inc in incomes:
                lines.append(f"h{hid},{region},{occ.value},{inc:.2f}")
                hid += 1
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return "R00"
