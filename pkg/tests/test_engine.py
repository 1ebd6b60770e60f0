import random

import pytest

from briefcanvas.constraints import ConstraintSet, merge_preserving_locks
from briefcanvas.engine import (
    DesignEngine,
    chain_from_dict,
    chain_to_dict,
    design_specifications,
    extract_html,
)
from briefcanvas.errors import ConstraintsInvalid, GenerationMalformed, ProviderError
from briefcanvas.prompts import ModificationRequest, build_user_prompt
from briefcanvas.providers import StubProvider

from helpers import build_catalog

MALFORMED = object()

# Hand-labeled model responses: (name, input, expected extraction).
EXTRACTION_FIXTURES = [
    ("fenced_basic",
     "```html\n<html><body>a</body></html>\n```",
     "<html><body>a</body></html>"),
    ("fenced_with_prose",
     "Sure! Here it is:\n```html\n<html>x</html>\n```\nEnjoy!",
     "<html>x</html>"),
    ("fenced_inner_whitespace",
     "```html\n\n  <html>y</html>\n\n```",
     "<html>y</html>"),
    ("two_fences_first_wins",
     "```html\n<html>first</html>\n```\n```html\n<html>second</html>\n```",
     "<html>first</html>"),
    ("unterminated_fence_falls_back",
     "```html\n<!DOCTYPE html>\n<html>z</html>",
     "<!DOCTYPE html>\n<html>z</html>"),
    ("bare_doctype",
     "<!DOCTYPE html>\n<html><body>b</body></html>",
     "<!DOCTYPE html>\n<html><body>b</body></html>"),
    ("bare_html_with_attrs",
     '<html lang="en"><body>c</body></html>',
     '<html lang="en"><body>c</body></html>'),
    ("noisy_bare_document",
     "intro text\n<!DOCTYPE html>\n<html>d</html>\ntrailing notes",
     "<!DOCTYPE html>\n<html>d</html>"),
    ("uppercase_doctype",
     "<!DOCTYPE HTML><html>e</html>",
     "<!DOCTYPE HTML><html>e</html>"),
    ("uppercase_closing_tag",
     "<html>f</HTML>",
     "<html>f</HTML>"),
    ("single_line_fence",
     "```html <html>g</html> ```",
     "<html>g</html>"),
    ("crlf_fence",
     "```html\r\n<html>h</html>\r\n```",
     "<html>h</html>"),
    ("prose_only", "here is your design", MALFORMED),
    ("empty", "", MALFORMED),
    ("whitespace_only", "   \n\t ", MALFORMED),
    ("unterminated_document", "<html><body>unterminated", MALFORMED),
    ("html_prefix_false_positive", "<htmlx>nope</htmlx>", MALFORMED),
    ("empty_fence", "```html\n```", MALFORMED),
    ("fenced_non_html_content",
     "```html\njust words\n```",
     "just words"),
    ("inner_backticks_end_block",
     "```html\n<html><pre>```code```</pre></html>\n```",
     "<html><pre>"),
]


class TestExtractHtml:
    @pytest.mark.parametrize(
        "name,raw,expected",
        EXTRACTION_FIXTURES,
        ids=[f[0] for f in EXTRACTION_FIXTURES],
    )
    def test_fixture(self, name, raw, expected):
        if expected is MALFORMED:
            with pytest.raises(GenerationMalformed):
                extract_html(raw)
        else:
            assert extract_html(raw) == expected

    def test_fixture_count_is_twenty(self):
        assert len(EXTRACTION_FIXTURES) == 20


class FailingProvider:
    default_model_id = "failing"

    def complete(self, req):
        raise ProviderError("synthetic outage")


@pytest.fixture
def engine():
    return DesignEngine(provider=StubProvider())


@pytest.fixture
def catalog_engine(tmp_path):
    catalog = build_catalog(tmp_path, {
        ("Travel & Transportation", "Home Page", "Desktop"): 3,
        ("Health and Fitness", "Search Page", "Mobile"): 2,
    })
    return DesignEngine(provider=StubProvider(), catalog=catalog)


class TestGenerate:
    def test_mobile_brief_document_and_viewport(self, engine, sample_briefs):
        design = engine.generate(sample_briefs[4])
        assert "#FF0000" in design.html_document
        assert design.device_viewport == (390, 844)
        assert design.constraints_snapshot == sample_briefs[4]

    def test_no_catalog_entry_leaves_reference_absent(self, catalog_engine):
        cs = ConstraintSet(industry="News", screen_type="Blog Page", device="Desktop")
        design = catalog_engine.generate(cs)
        assert design.reference_screen_id is None

    def test_same_seed_same_reference(self, catalog_engine, sample_briefs):
        a = catalog_engine.generate(sample_briefs[0], seed=7)
        b = catalog_engine.generate(sample_briefs[0], seed=7)
        assert a.reference_screen_id is not None
        assert a.reference_screen_id == b.reference_screen_id

    def test_fingerprint_reproducible_from_provenance(self, catalog_engine, sample_briefs):
        design = catalog_engine.generate(sample_briefs[0], seed=3)
        ref = next(
            s for s in catalog_engine.catalog.screens
            if s.id == design.reference_screen_id
        )
        rebuilt = build_user_prompt(design.constraints_snapshot, ref)
        assert rebuilt.fingerprint == design.prompt_fingerprint

    def test_invalid_constraints_rejected(self, engine):
        with pytest.raises(ConstraintsInvalid):
            engine.generate(ConstraintSet(device="Watch"))

    def test_provider_error_carries_stage(self, sample_briefs):
        engine = DesignEngine(provider=FailingProvider())
        with pytest.raises(ProviderError) as err:
            engine.generate(sample_briefs[0])
        assert err.value.stage == "completion"

    def test_locked_values_flow_into_prompt(self, engine):
        current = ConstraintSet(
            industry="News", device="Desktop", screen_type="Home Page",
            colors=("#111111",), locks=frozenset({"colors", "device"}))
        incoming = ConstraintSet(
            industry="Education", device="Mobile", screen_type="Blog Page",
            colors=("#EEEEEE",))
        merged = merge_preserving_locks(current, incoming)
        design = engine.generate(merged)
        assert "#111111" in design.html_document
        assert design.device_viewport == (1440, 900)


def edit_request(**overrides):
    base = dict(target_selector="body/nav[1]",
                preset_ops=frozenset({"resize-larger"}))
    base.update(overrides)
    return ModificationRequest(**base)


class TestVersionChains:
    def test_edit_appends_and_moves_index(self, engine, sample_briefs):
        chain = engine.new_chain(engine.generate(sample_briefs[0]))
        assert (len(chain.versions), chain.current_index) == (1, 0)
        engine.regenerate_with_edit(chain, edit_request())
        assert (len(chain.versions), chain.current_index) == (2, 1)
        assert chain.versions[0].html_document != chain.versions[1].html_document

    def test_edit_builds_from_displayed_version(self, engine, sample_briefs):
        chain = engine.new_chain(engine.generate(sample_briefs[0]))
        engine.regenerate_with_edit(chain, edit_request())
        v0 = chain.versions[0].html_document
        chain.navigate(0)
        engine.regenerate_with_edit(chain, edit_request(free_text="darker header"))
        assert len(chain.versions) == 3
        assert chain.current_index == 2
        # stub edits keep the base document as a prefix before the marker
        assert chain.versions[2].html_document.startswith(v0[: v0.rfind("</html>")])

    def test_failed_edit_leaves_chain_untouched(self, sample_briefs):
        good = DesignEngine(provider=StubProvider())
        chain = good.new_chain(good.generate(sample_briefs[0]))
        snapshot = chain_to_dict(chain)
        bad = DesignEngine(provider=FailingProvider())
        with pytest.raises(ProviderError):
            bad.regenerate_with_edit(chain, edit_request())
        assert chain_to_dict(chain) == snapshot

    def test_navigate_bounds(self, engine, sample_briefs):
        chain = engine.new_chain(engine.generate(sample_briefs[0]))
        with pytest.raises(IndexError):
            chain.navigate(1)
        with pytest.raises(IndexError):
            chain.navigate(-1)

    def test_duplicate_copies_current_into_fresh_slot(self, engine, sample_briefs):
        chain = engine.new_chain(engine.generate(sample_briefs[0]))
        engine.regenerate_with_edit(chain, edit_request())
        fresh = engine.duplicate(chain)
        assert fresh.slot_id != chain.slot_id
        assert len(fresh.versions) == 1
        assert fresh.current_index == 0
        assert fresh.versions[0].html_document == chain.current.html_document
        assert fresh.versions[0].id != chain.current.id

    def test_chain_serialization_round_trip(self, engine, sample_briefs):
        chain = engine.new_chain(engine.generate(sample_briefs[1]))
        engine.regenerate_with_edit(chain, edit_request())
        restored = chain_from_dict(chain_to_dict(chain))
        assert restored.slot_id == chain.slot_id
        assert restored.current_index == chain.current_index
        assert [d.html_document for d in restored.versions] == \
               [d.html_document for d in chain.versions]
        assert [d.constraints_snapshot for d in restored.versions] == \
               [d.constraints_snapshot for d in chain.versions]

    def test_random_operation_sequences_never_mutate_versions(self, engine, sample_briefs):
        rng = random.Random(99)
        chain = engine.new_chain(engine.generate(sample_briefs[0]))
        recorded = {0: chain.versions[0].html_document}
        for _ in range(20):
            op = rng.choice(("edit", "navigate"))
            if op == "edit":
                engine.regenerate_with_edit(chain, edit_request(
                    free_text=f"tweak {rng.randrange(100)}"))
                recorded[len(chain.versions) - 1] = chain.current.html_document
            else:
                chain.navigate(rng.randrange(len(chain.versions)))
            for index, html in recorded.items():
                assert chain.versions[index].html_document == html


class TestSpecificationSheet:
    def test_lists_constraints(self, engine, sample_briefs):
        design = engine.generate(sample_briefs[0])
        sheet = design_specifications(design)
        assert "Industry: Travel & Transportation" in sheet
        assert "Device: Desktop" in sheet
        assert "Colors: #2C3E50, #18BC9C, #ECF0F1" in sheet
        assert "Reference screen: none" in sheet

    def test_theme_row_omitted_when_absent(self, engine, sample_briefs):
        sheet = design_specifications(engine.generate(sample_briefs[0]))
        assert "Design Theme" not in sheet

    def test_deterministic(self, engine, sample_briefs):
        design = engine.generate(sample_briefs[2])
        assert design_specifications(design) == design_specifications(design)
