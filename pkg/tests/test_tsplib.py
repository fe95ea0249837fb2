import pytest
from hypothesis import given, strategies as st

from fsstsp.tsplib import (KNOWN_BEST, REFERENCE_RESULTS, DimensionError, RawInstance,
                           TsplibParseError, UnsupportedTypeError, bundled_dir, bundled_instance, bundled_opt_tour,
                           format_instance, format_tour, known_best, load_known_best,
                           parse_instance, parse_tour)

TRIANGLE = """NAME : tri
TYPE : TSP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
"""


def test_minimal_three_nodes():
    raw = parse_instance(TRIANGLE)
    assert raw.dimension == 3
    assert raw.name == "tri"
    assert raw.coords == ((0.0, 0.0), (3.0, 0.0), (0.0, 4.0))


def test_colon_spacing_variants_and_missing_eof():
    text = TRIANGLE.replace(" : ", ": ").replace("EOF\n", "")
    assert parse_instance(text) == parse_instance(TRIANGLE)


def test_eil51_header():
    raw = bundled_instance("eil51")
    assert (raw.name, raw.dimension) == ("eil51", 51)


def test_geo_rejected():
    with pytest.raises(UnsupportedTypeError):
        parse_instance(TRIANGLE.replace("EUC_2D", "GEO"))


def test_coordinate_count_mismatch():
    with pytest.raises(DimensionError):
        parse_instance(TRIANGLE.replace("DIMENSION : 3", "DIMENSION : 4"))


def test_malformed_header_names_line():
    bad = TRIANGLE.replace("TYPE : TSP", "this is not a header")
    with pytest.raises(TsplibParseError) as info:
        parse_instance(bad)
    assert info.value.line_no == 2


def test_node_ids_out_of_order_are_placed_by_index():
    text = TRIANGLE.replace("1 0 0\n2 3 0\n3 0 4", "3 0 4\n1 0 0\n2 3 0")
    assert parse_instance(text).coords == parse_instance(TRIANGLE).coords


def test_raw_instance_invariants():
    with pytest.raises(ValueError):
        RawInstance("x", 2, ((0.0, 0.0), (1.0, 1.0)), "EUC_2D")
    with pytest.raises(ValueError):
        RawInstance("x", 3, ((0.0, 0.0),), "EUC_2D")


def test_known_best_table():
    assert len(REFERENCE_RESULTS) == 48 and len(KNOWN_BEST) == 48
    assert known_best("eil51") == 426
    assert known_best("pr2392") == 378032
    assert known_best("notaninstance") is None


def test_reference_known_best_never_beaten():
    for name, row in REFERENCE_RESULTS.items():
        assert min(row[:5]) >= row[5], name


def test_load_known_best(tmp_path):
    f = tmp_path / "kb.txt"
    f.write_text("# comment\neil51 427\nfoo,12\n")
    assert load_known_best(f) == {"eil51": 427, "foo": 12}


def test_all_bundled_files_parse():
    files = sorted(bundled_dir().glob("*.tsp"))
    assert len(files) >= 46
    for f in files:
        raw = parse_instance(f.read_text())
        assert raw.name in REFERENCE_RESULTS


def test_opt_tour_parse_and_format_round_trip():
    order = bundled_opt_tour("eil51")
    assert sorted(order) == list(range(51))
    name, again = parse_tour(format_tour("eil51", order, 426))
    assert name == "eil51" and again == order


coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).map(lambda v: round(v, 3))


@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=30))
def test_round_trip(coords):
    raw = RawInstance("r", len(coords), tuple(coords), "EUC_2D")
    text = format_instance(raw)
    assert parse_instance(text) == raw
    assert parse_instance(text) == parse_instance(text)
