import json

import pytest

from triplesym.errors import PreconditionFailed
from triplesym.ok_ring import QuadField
from triplesym.redei import pair_admissible, triple_admissible
from triplesym.residue import parse_ideal
from triplesym.search import (
    CSV_COLUMNS,
    SearchRecord,
    candidate_ideals,
    load_cache,
    records_csv,
    run_search,
    sidecar_path,
    write_cache,
)

F5 = QuadField(5)


@pytest.fixture(scope="module")
def records_1000():
    return run_search(5, 1000)


def test_field_gate():
    with pytest.raises(PreconditionFailed):
        run_search(229, 100)  # h+ = 3
    with pytest.raises(PreconditionFailed):
        run_search(17, 100)  # 2 splits
    with pytest.raises(ValueError):
        run_search(7, 100)


def test_candidates_filtered():
    for P in candidate_ideals(F5, 400):
        assert P.norm % 4 == 1 and P.generator is not None


def test_borromean_record_present(records_1000):
    target = tuple(parse_ideal(t, F5) for t in ("33+8√5", "17", "(23+5√5)/2"))
    hits = [r for r in records_1000 if r.triple == target]
    assert len(hits) == 1 and hits[0].symbol == -1
    assert hits[0].csv_row()[0] == "5"
    keys = [r.key for r in records_1000]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_small_bound_pairs_admissible():
    records = run_search(5, 150)
    assert records
    for r in records:
        assert pair_admissible(*r.triple[:2])
        assert triple_admissible(*r.triple)
        assert max(P.norm for P in r.triple) <= 150


def test_jobs_do_not_change_output():
    one = run_search(5, 300, jobs=1)
    three = run_search(5, 300, jobs=3)
    strip = lambda rs: [{k: v for k, v in r.to_json().items() if k != "timestamp"} for r in rs]
    assert strip(one) == strip(three)


def test_cache_round_trip_and_idempotence(tmp_path):
    out = tmp_path / "cache" / "search.csv"
    records = run_search(5, 300)
    write_cache(out, records, {"p": 5, "norm_bound": 300})
    first = out.read_text()
    assert first.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert json.loads(sidecar_path(out).read_text())["norm_bound"] == 300
    loaded = load_cache(out)
    assert [r.to_json() for r in loaded] == [r.to_json() for r in records]
    for r in loaded:
        assert r.recompute() == r.symbol
    again = run_search(5, 300, existing=loaded)
    write_cache(out, again, {"p": 5, "norm_bound": 300})
    assert out.read_text() == first


def test_cache_grows_with_bound(tmp_path):
    out = tmp_path / "s.csv"
    small = run_search(5, 150)
    write_cache(out, small)
    bigger = run_search(5, 300, existing=load_cache(out))
    assert {r.key for r in small} < {r.key for r in bigger}
    assert records_csv(bigger) == records_csv(run_search(5, 300))


def test_corrupt_cache_reports_path(tmp_path):
    out = tmp_path / "s.csv"
    write_cache(out, run_search(5, 150))
    out.write_text(out.read_text() + "5,1,1,1,1,1,1,1\n")
    with pytest.raises(OSError, match="s.csv"):
        load_cache(out)
    sidecar_path(out).write_text("{not json")
    with pytest.raises(OSError, match="s.json"):
        load_cache(out)


def test_record_json_round_trip(records_1000):
    r = records_1000[0]
    assert SearchRecord.from_json(json.loads(json.dumps(r.to_json()))) == r
