import json

import pytest

from satake.datasets import (DatasetError, ParseError, bundled_path,
                             dataset_from_dict, load_dataset, parse_factored_integer,
                             resolve_dataset, serialize_dataset)


class TestParseFactoredInteger:
    @pytest.mark.parametrize("text, expected", [
        ("-2^8*3^2*5*73", -840960),
        ("1", 1),
        ("2^6*3^3*5", 8640),
        ("  -2 ^ 8 * 3^2*5* 73 ", -840960),
        ("+7", 7),
        ("2^16*523*7243", 2 ** 16 * 523 * 7243),
    ])
    def test_values(self, text, expected):
        assert parse_factored_integer(text) == expected

    @pytest.mark.parametrize("text, position", [
        ("", 0),
        ("2**3", 2),
        ("2^", 2),
        ("2*", 1),
        ("a*3", 0),
        ("2^3^4", 3),
    ])
    def test_errors_carry_position(self, text, position):
        with pytest.raises(ParseError) as info:
            parse_factored_integer(text)
        assert info.value.position == position


@pytest.fixture(scope="module")
def genus2():
    return load_dataset(bundled_path("skoruppa_genus2"))


@pytest.fixture(scope="module")
def genus4():
    return load_dataset(bundled_path("schottky_genus4"))


class TestBundledGenus2:
    def test_record_counts(self, genus2):
        assert len(genus2.records) == 19
        excluded = [r for r in genus2.records if r.excluded]
        assert len(excluded) == 1
        assert (excluded[0].label, excluded[0].p) == ("Y24a", 5)
        assert len(genus2.clean_records()) == 18

    def test_row_values(self, genus2):
        rec = next(r for r in genus2.records if r.label == "Y20" and r.p == 2)
        assert rec.lambda_t0p == -(2 ** 8) * 3 ** 2 * 5 * 73
        assert rec.aggregate_tp2 == 2 ** 16 * 523 * 7243
        assert rec.k == 20 and rec.n == 2

    def test_round_trip_bytes(self, genus2):
        path = bundled_path("skoruppa_genus2")
        assert serialize_dataset(genus2) == path.read_text()

    def test_labels_unique_per_prime(self, genus2):
        keys = [(r.label, r.p) for r in genus2.records]
        assert len(keys) == len(set(keys))


class TestBundledGenus4:
    def test_records(self, genus4):
        assert len(genus4.records) == 4
        assert sorted(r.p for r in genus4.records) == [2, 3, 5, 7]
        for rec in genus4.records:
            assert rec.n == 4 and rec.k == 8
            # published labels are dual: their T_1 is the internal T_3
            assert set(rec.generator_eigenvalues) == {1, 2, 3}

    def test_label_translation(self, genus4):
        rec = next(r for r in genus4.records if r.p == 2)
        # published column T_1 = -2^13*3*5 lands on internal generator 3
        assert rec.generator_eigenvalues[3] == -(2 ** 13) * 3 * 5
        assert rec.generator_eigenvalues[1] == -(2 ** 14) * 3 ** 3 * 5 ** 2

    def test_synthesized_scalar_flagged_downstream(self, genus4):
        from satake.hecke import constants_from_record
        from satake.krieg import omega_matrix

        rec = next(r for r in genus4.records if r.p == 2)
        derived = constants_from_record(rec, omega_matrix(4, 8, 2))
        assert "synthesized-lambda-tn" in derived.flags

    def test_round_trip_bytes(self, genus4):
        path = bundled_path("schottky_genus4")
        assert serialize_dataset(genus4) == path.read_text()


class TestValidation:
    def base(self):
        return {
            "source": "test",
            "genus": 2,
            "weight": 20,
            "records": [
                {"label": "A", "p": 2, "T0p": "1", "Tp2_aggregate": "3", "Ti_p2": None, "flags": []},
            ],
        }

    def test_empty_dataset_is_valid(self):
        data = self.base()
        data["records"] = []
        ds = dataset_from_dict(data)
        assert ds.records == ()

    def test_duplicate_label_prime(self):
        data = self.base()
        data["records"].append(dict(data["records"][0]))
        with pytest.raises(DatasetError, match="duplicate"):
            dataset_from_dict(data)

    def test_both_forms_rejected(self):
        data = self.base()
        data["records"][0]["Ti_p2"] = {"1": "3"}
        with pytest.raises(DatasetError, match="exactly one"):
            dataset_from_dict(data)

    def test_scalar_consistency_enforced(self):
        data = self.base()
        data["records"][0] = {"label": "A", "p": 2, "T0p": "1", "Tp2_aggregate": None,
                              "Ti_p2": {"1": "3", "2": "5"}, "flags": []}
        with pytest.raises(DatasetError, match="similitude"):
            dataset_from_dict(data)

    def test_bad_parse_is_dataset_error(self):
        data = self.base()
        data["records"][0]["T0p"] = "2**5"
        with pytest.raises(DatasetError):
            dataset_from_dict(data)

    def test_missing_weight(self):
        data = self.base()
        data["weight"] = None
        with pytest.raises(DatasetError, match="weight"):
            dataset_from_dict(data)

    def test_unknown_generator_labels(self):
        data = self.base()
        data["generator_labels"] = "whatever"
        with pytest.raises(DatasetError, match="generator_labels"):
            dataset_from_dict(data)

    def test_resolve_prefers_path(self, tmp_path):
        data = self.base()
        target = tmp_path / "mini.json"
        target.write_text(json.dumps(data))
        ds = resolve_dataset(target)
        assert ds.source == "test"

    def test_resolve_bundled_fallback(self):
        ds = resolve_dataset("skoruppa_genus2")
        assert len(ds.records) == 19

    def test_resolve_missing(self):
        with pytest.raises(DatasetError, match="no such dataset"):
            resolve_dataset("nope_does_not_exist")
