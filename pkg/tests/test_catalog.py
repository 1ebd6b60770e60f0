import io
import random
from collections import Counter

import numpy as np
import pytest
from PIL import Image

from briefcanvas.catalog import (
    MAX_SCREENS_PER_BUCKET,
    ingest_screen,
    load_catalog,
    query,
    to_grayscale_png,
    verify_catalog,
)
from briefcanvas.errors import CatalogError

from helpers import build_catalog, solid_png


def png_pixels(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as img:
        return np.asarray(img.convert("RGB"))


class TestGrayscale:
    def test_pure_red_becomes_equal_channels(self):
        gray = to_grayscale_png(solid_png(color=(255, 0, 0), size=(10, 10)))
        pixels = png_pixels(gray)
        # Luma of pure red with half-up rounding: (299*255 + 500) // 1000
        assert (pixels == 76).all()

    def test_already_gray_passes_through(self):
        source = solid_png(color=(120, 120, 120))
        assert np.array_equal(png_pixels(to_grayscale_png(source)), png_pixels(source))

    def test_conversion_idempotent(self):
        once = to_grayscale_png(solid_png(color=(13, 200, 77)))
        twice = to_grayscale_png(once)
        assert np.array_equal(png_pixels(once), png_pixels(twice))

    def test_undecodable_bytes_rejected(self):
        with pytest.raises(CatalogError):
            to_grayscale_png(b"definitely not an image")


class TestIngest:
    def test_ingest_then_load_round_trip(self, tmp_path):
        screen = ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Desktop", "appX")
        catalog = load_catalog(tmp_path / "manifest.csv")
        assert [s.id for s in catalog.screens] == [screen.id]
        assert catalog.index[("News", "Home Page")][0].source_label == "appX"

    def test_unknown_industry_rejected(self, tmp_path):
        with pytest.raises(CatalogError):
            ingest_screen(tmp_path, solid_png(), "Aerospace", "Home Page", "Desktop")

    def test_unknown_screen_type_rejected(self, tmp_path):
        with pytest.raises(CatalogError):
            ingest_screen(tmp_path, solid_png(), "News", "Checkout", "Desktop")

    def test_unknown_device_rejected(self, tmp_path):
        with pytest.raises(CatalogError):
            ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Watch")

    def test_bucket_cap_enforced(self, tmp_path):
        for _ in range(MAX_SCREENS_PER_BUCKET):
            ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Desktop")
        with pytest.raises(CatalogError, match="already holds"):
            ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Desktop")

    def test_cap_is_per_bucket(self, tmp_path):
        for _ in range(3):
            ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Desktop")
        ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Mobile")
        ingest_screen(tmp_path, solid_png(), "News", "Blog Page", "Desktop")


class TestLoad:
    def test_counts_and_index(self, tmp_path):
        catalog = build_catalog(tmp_path, {
            ("News", "Home Page", "Desktop"): 2,
            ("Education", "Blog Page", "Mobile"): 2,
        })
        assert len(catalog.screens) == 4
        assert set(catalog.index) == {("News", "Home Page"), ("Education", "Blog Page")}

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(CatalogError, match="manifest not found"):
            load_catalog(tmp_path / "manifest.csv")

    def test_missing_image_names_entry(self, tmp_path):
        screen = ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Desktop")
        (tmp_path / screen.image_path).unlink()
        with pytest.raises(CatalogError, match=screen.id):
            load_catalog(tmp_path / "manifest.csv")

    def test_duplicate_id_same_bucket_rejected(self, tmp_path):
        screen = ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Desktop")
        manifest = tmp_path / "manifest.csv"
        row = manifest.read_text().strip().splitlines()[-1]
        manifest.write_text(manifest.read_text() + row + "\n")
        with pytest.raises(CatalogError, match="duplicate"):
            load_catalog(manifest)

    def test_malformed_row_rejected(self, tmp_path):
        ingest_screen(tmp_path, solid_png(), "News", "Home Page", "Desktop")
        manifest = tmp_path / "manifest.csv"
        manifest.write_text(manifest.read_text() + "only-an-id,,,,,\n")
        with pytest.raises(CatalogError, match="malformed"):
            load_catalog(manifest)

    def test_wrong_header_rejected(self, tmp_path):
        manifest = tmp_path / "manifest.csv"
        manifest.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(CatalogError, match="header"):
            load_catalog(manifest)


class TestQuery:
    def test_singleton_bucket_every_seed(self, tmp_path):
        catalog = build_catalog(tmp_path, {("News", "Home Page", "Desktop"): 1})
        only = catalog.screens[0]
        for seed in range(50):
            assert query(catalog, "News", "Home Page", random.Random(seed)) is only

    def test_absent_key_returns_nothing(self, tmp_path):
        catalog = build_catalog(tmp_path, {("News", "Home Page", "Desktop"): 1})
        assert query(catalog, "News", "Search Page", random.Random(0)) is None
        assert query(catalog, "Education", "Home Page", random.Random(0)) is None

    def test_deterministic_under_fixed_seed(self, tmp_path):
        catalog = build_catalog(tmp_path, {("News", "Home Page", "Desktop"): 4})
        for seed in range(25):
            a = query(catalog, "News", "Home Page", random.Random(seed))
            b = query(catalog, "News", "Home Page", random.Random(seed))
            assert a is b

    def test_device_not_part_of_query_key(self, tmp_path):
        catalog = build_catalog(tmp_path, {
            ("News", "Home Page", "Desktop"): 1,
            ("News", "Home Page", "Mobile"): 1,
        })
        devices = {
            query(catalog, "News", "Home Page", random.Random(seed)).device
            for seed in range(40)
        }
        assert devices == {"Desktop", "Mobile"}

    def test_selection_uniform_over_four_screens(self, tmp_path):
        catalog = build_catalog(tmp_path, {("News", "Home Page", "Desktop"): 4})
        counts = Counter(
            query(catalog, "News", "Home Page", random.Random(seed)).id
            for seed in range(10_000)
        )
        assert len(counts) == 4
        for n in counts.values():
            assert abs(n / 10_000 - 0.25) <= 0.02


class TestVerify:
    def test_clean_catalog_passes(self, tmp_path):
        catalog = build_catalog(tmp_path, {("News", "Home Page", "Desktop"): 2})
        assert verify_catalog(catalog) == []

    def test_non_gray_image_flagged(self, tmp_path):
        catalog = build_catalog(tmp_path, {("News", "Home Page", "Desktop"): 1})
        screen = catalog.screens[0]
        (tmp_path / screen.image_path).write_bytes(solid_png(color=(250, 10, 10)))
        problems = verify_catalog(catalog)
        assert problems and "not grayscale" in problems[0]
