import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from briefcanvas.constraints import (
    FIELD_ORDER,
    ConstraintSet,
    export_settings,
    import_settings,
    merge_preserving_locks,
    normalize_hex,
    validate,
)
from briefcanvas.errors import ConstraintsInvalid, SettingsParseError

from helpers import random_constraint_set


def valid_set(**overrides):
    base = dict(
        industry="Travel & Transportation",
        device="Desktop",
        screen_type="Home Page",
        colors=("#2C3E50", "#18BC9C", "#ECF0F1"),
        fonts=("Orelega One", "Pacifico", "Montserrat"),
    )
    base.update(overrides)
    return ConstraintSet(**base)


class TestValidate:
    def test_full_valid_set_passes(self):
        assert validate(valid_set()) == []

    def test_six_colors_is_one_out_of_range_issue(self):
        cs = valid_set(colors=tuple(f"#00000{i}" for i in range(6)))
        issues = validate(cs)
        assert len(issues) == 1
        assert (issues[0].field, issues[0].code) == ("colors", "out-of-range")

    def test_missing_hash_is_malformed_color(self):
        issues = validate(valid_set(colors=("2C3E50",)))
        assert [(i.field, i.code) for i in issues] == [("colors", "malformed-color")]

    def test_four_fonts_out_of_range(self):
        issues = validate(valid_set(fonts=("A", "B", "C", "D")))
        assert [(i.field, i.code) for i in issues] == [("fonts", "out-of-range")]

    def test_empty_font_name_rejected(self):
        issues = validate(valid_set(fonts=("Lato", " ")))
        assert issues and issues[0].field == "fonts"

    def test_unknown_device(self):
        issues = validate(valid_set(device="Watch"))
        assert [(i.field, i.code) for i in issues] == [("device", "unknown-enum-value")]

    def test_unknown_style_and_theme(self):
        issues = validate(valid_set(style="Brutalism", design_theme="FluentDesign"))
        assert {(i.field, i.code) for i in issues} == {
            ("style", "unknown-enum-value"),
            ("design_theme", "unknown-enum-value"),
        }

    def test_unknown_lock_target(self):
        issues = validate(valid_set(locks=frozenset({"colors", "bogus"})))
        assert [(i.field, i.code) for i in issues] == [("locks", "unknown-lock-target")]

    def test_validate_never_mutates(self):
        cs = valid_set()
        before = (cs.colors, cs.fonts, cs.locks)
        validate(cs)
        assert (cs.colors, cs.fonts, cs.locks) == before


class TestNormalization:
    @pytest.mark.parametrize("raw,expected", [
        ("#2c3e50", "#2C3E50"),
        ("#ABC", "#AABBCC"),
        ("#AbC", "#AABBCC"),
        ("#18BC9C", "#18BC9C"),
    ])
    def test_normalize_hex(self, raw, expected):
        assert normalize_hex(raw) == expected

    def test_malformed_color_left_for_validation(self):
        assert normalize_hex("2C3E50") == "2C3E50"
        assert normalize_hex("#12345") == "#12345"

    def test_construction_normalizes(self):
        cs = ConstraintSet(colors=("#abc", "#2c3e50"))
        assert cs.colors == ("#AABBCC", "#2C3E50")


class TestExportImport:
    def test_colors_array_survives_exactly(self):
        doc = json.loads(export_settings(valid_set()).decode("utf-8"))
        assert doc["colors"] == ["#2C3E50", "#18BC9C", "#ECF0F1"]

    def test_empty_set_serializes_empty(self):
        doc = json.loads(export_settings(ConstraintSet()).decode("utf-8"))
        assert doc["colors"] == [] and doc["fonts"] == [] and doc["locks"] == []
        assert doc["style"] is None and doc["design_theme"] is None and doc["logo"] is None
        assert doc["product_purpose"] == "" and doc["features_text"] == ""

    def test_export_is_byte_deterministic(self):
        cs = valid_set(locks=frozenset({"colors", "device"}))
        assert export_settings(cs) == export_settings(cs)

    def test_canonical_bytes_golden(self):
        doc = export_settings(ConstraintSet(device="Mobile", colors=("#ABC",)))
        expected = (
            '{\n'
            '  "schema_version": 1,\n'
            '  "industry": "",\n'
            '  "product_purpose": "",\n'
            '  "target_audience": "",\n'
            '  "device": "Mobile",\n'
            '  "screen_type": "",\n'
            '  "colors": [\n'
            '    "#AABBCC"\n'
            '  ],\n'
            '  "fonts": [],\n'
            '  "style": null,\n'
            '  "design_theme": null,\n'
            '  "logo": null,\n'
            '  "features_text": "",\n'
            '  "locks": []\n'
            '}\n'
        ).encode("utf-8")
        assert doc == expected

    def test_export_rejects_invalid_set(self):
        with pytest.raises(ConstraintsInvalid) as err:
            export_settings(valid_set(device="Watch"))
        assert err.value.issues[0].code == "unknown-enum-value"

    def test_round_trip_identity(self):
        rng = random.Random(20260809)
        for _ in range(200):
            cs = random_constraint_set(rng)
            assert import_settings(export_settings(cs)) == cs

    def test_unknown_top_level_field_ignored(self):
        doc = json.loads(export_settings(valid_set()).decode("utf-8"))
        doc["future_field"] = {"nested": True}
        cs = import_settings(json.dumps(doc).encode("utf-8"))
        assert cs == valid_set()

    def test_unknown_device_rejected_on_import(self):
        doc = json.loads(export_settings(valid_set()).decode("utf-8"))
        doc["device"] = "Watch"
        with pytest.raises(ConstraintsInvalid) as err:
            import_settings(json.dumps(doc).encode("utf-8"))
        assert err.value.issues[0].code == "unknown-enum-value"

    def test_malformed_json_reports_byte_offset(self):
        with pytest.raises(SettingsParseError) as err:
            import_settings(b'{"schema_version": 1, oops}')
        assert err.value.byte_offset == 22

    def test_non_object_document_rejected(self):
        with pytest.raises(SettingsParseError):
            import_settings(b'[1, 2, 3]')

    def test_wrong_field_type_rejected(self):
        with pytest.raises(SettingsParseError):
            import_settings(b'{"colors": "not-a-list"}')


class TestMergePreservingLocks:
    def test_locked_colors_survive(self):
        current = valid_set(locks=frozenset({"colors"}))
        incoming = valid_set(colors=("#111111",), fonts=("Lato",))
        merged = merge_preserving_locks(current, incoming)
        assert merged.colors == current.colors
        assert merged.fonts == ("Lato",)
        assert merged.locks == frozenset({"colors"})

    def test_no_locks_is_identity_on_incoming(self):
        current = valid_set(locks=frozenset())
        incoming = valid_set(industry="News", colors=("#000000",))
        merged = merge_preserving_locks(current, incoming)
        assert merged == incoming

    def test_all_locks_is_fixpoint_on_current(self):
        current = valid_set(locks=frozenset(FIELD_ORDER))
        incoming = valid_set(industry="News", device="Mobile", colors=("#000000",))
        assert merge_preserving_locks(current, incoming) == current


# Strategy over valid constraint sets, driven through the same generator the
# round-trip oracle uses.
constraint_sets = st.integers(min_value=0, max_value=2 ** 32 - 1).map(
    lambda seed: random_constraint_set(random.Random(seed))
)


@settings(max_examples=60)
@given(constraint_sets)
def test_property_round_trip(cs):
    assert import_settings(export_settings(cs)) == cs


@settings(max_examples=60)
@given(constraint_sets, constraint_sets)
def test_property_merge_idempotent(current, incoming):
    once = merge_preserving_locks(current, incoming)
    twice = merge_preserving_locks(current, once)
    assert once == twice


@settings(max_examples=60)
@given(constraint_sets, constraint_sets)
def test_property_merge_respects_every_lock(current, incoming):
    merged = merge_preserving_locks(current, incoming)
    for name in FIELD_ORDER:
        if name in current.locks:
            assert merged.value_of(name) == current.value_of(name)
        else:
            assert merged.value_of(name) == incoming.value_of(name)
