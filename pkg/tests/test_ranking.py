import csv
import io
import json

import pytest

from treenergy.errors import CapExceeded, UnresolvedTie
from treenergy.graph import Path, Starlike, build, canonical_code
from treenergy.ranking import CACHE_FILE, EnergyCache, rank_by_energy, ranking_csv, ranking_json


def code(spec):
    return canonical_code(build(spec))


def test_n10_top4():
    entries = rank_by_energy(10, top=4)
    assert [e.rank for e in entries] == [1, 2, 3, 4]
    assert entries[0].code == code(Path(10))
    assert entries[3].code == code(Starlike(10, (2, 6, 1)))
    mids = [e.energy.midpoint for e in entries]
    assert mids == sorted(mids, reverse=True)


def test_top_one_is_path():
    (e,) = rank_by_energy(10, top=1)
    assert e.spec == "P(10)"


def test_cospectral_pair_shares_a_group():
    entries = rank_by_energy(9)
    a = next(e for e in entries if e.code == code(Starlike(9, (2, 1, 5))))
    b = next(e for e in entries if e.code == code(Starlike(9, (2, 2, 2, 2))))
    assert a.tie_group == b.tie_group and abs(a.rank - b.rank) == 1
    # different phi_tilde, so the tie cannot be called identical
    assert a.tie == b.tie == "unresolved"


def test_strict_mode_raises_on_unresolved_tie():
    with pytest.raises(UnresolvedTie):
        rank_by_energy(9, strict=True)


def test_cap():
    with pytest.raises(CapExceeded):
        rank_by_energy(25)


def test_full_ranking_is_sorted_and_complete():
    entries = rank_by_energy(11)
    assert len(entries) == 235
    for a, b in zip(entries, entries[1:]):
        assert a.energy.midpoint >= b.energy.midpoint or a.tie_group == b.tie_group or b.ordered_by == "quasi-order"


def test_jobs_do_not_change_output():
    one = ranking_csv(rank_by_energy(12, top=20, jobs=1))
    four = ranking_csv(rank_by_energy(12, top=20, jobs=4))
    assert one == four


def test_cache_round_trip(tmp_path):
    cache = EnergyCache(tmp_path)
    first = rank_by_energy(9, top=5, cache=cache)
    lines = (tmp_path / CACHE_FILE).read_text().splitlines()
    assert len(lines) == 47
    code_, poly, mid, rad = lines[0].split("\t")
    assert float(rad) <= 1e-10 and poly.startswith("x^9")
    again = rank_by_energy(9, top=5, cache=EnergyCache(tmp_path))
    assert [e.code for e in again] == [e.code for e in first]
    assert (tmp_path / CACHE_FILE).read_text().splitlines() == lines  # nothing recomputed


def test_cache_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("TREENERGY_CACHE_DIR", str(tmp_path))
    assert EnergyCache.from_env().path == tmp_path / CACHE_FILE
    monkeypatch.delenv("TREENERGY_CACHE_DIR")
    assert EnergyCache.from_env().path is None


def test_csv_and_json():
    entries = rank_by_energy(10, top=4)
    rows = list(csv.DictReader(io.StringIO(ranking_csv(entries))))
    assert list(rows[0]) == ["rank", "code", "spec", "energy", "radius", "tie_group"]
    assert rows[3]["spec"] == "S(10;1,2,6)"
    recs = json.loads(ranking_json(entries))
    assert recs[0]["spec"] == "P(10)" and recs[0]["radius"] <= 1e-10
