import shutil
import threading
import time

import pytest

from conftest import ground_truth_config
from docpipe import ocr
from docpipe.errors import (
    EngineTimeout,
    EngineUnavailable,
    MissingImage,
    UnsupportedLanguage,
)
from docpipe.languages import get_language
from docpipe.metrics import cer


def external_config(stub_engine, **kwargs):
    defaults = dict(languages=(get_language("eng"),),
                    engine=ocr.Engine.EXTERNAL,
                    engine_path=str(stub_engine))
    defaults.update(kwargs)
    return ocr.OcrConfig(**defaults)


class TestGroundTruthEngine:
    def test_sidecar_identity(self, ground_truth_doc):
        image = ground_truth_doc("राम घर गया।")
        result = ocr.run_ocr(image, ground_truth_config("hin"))
        assert result.full_text == "राम घर गया।"
        assert result.mean_confidence == 1.0
        assert result.engine_id == ocr.GROUND_TRUTH_ENGINE_ID

    def test_round_trip_byte_for_byte(self, ground_truth_doc):
        text = "  spaced\ttext\nwith  layout \n"
        image = ground_truth_doc(text, name="layout")
        assert ocr.run_ocr(image, ground_truth_config()).full_text == text

    def test_missing_image(self, tmp_path):
        with pytest.raises(MissingImage):
            ocr.run_ocr(tmp_path / "missing.png", ground_truth_config())

    def test_missing_sidecar(self, tmp_path):
        from PIL import Image
        image = tmp_path / "nosidecar.png"
        Image.new("RGB", (8, 8)).save(image)
        with pytest.raises(MissingImage):
            ocr.run_ocr(image, ground_truth_config())

    def test_token_confidences_and_mean(self, ground_truth_doc):
        image = ground_truth_doc("one two three")
        result = ocr.run_ocr(image, ground_truth_config())
        assert [t.text for t in result.tokens] == ["one", "two", "three"]
        assert all(t.confidence == 1.0 for t in result.tokens)

    def test_empty_sidecar_zero_confidence(self, ground_truth_doc):
        image = ground_truth_doc("")
        result = ocr.run_ocr(image, ground_truth_config())
        assert result.tokens == ()
        assert result.mean_confidence == 0.0


class TestExternalEngine:
    def test_stub_tsv_parsing(self, ground_truth_doc, stub_engine):
        image = ground_truth_doc("ignored")
        result = ocr.run_ocr(image, external_config(stub_engine))
        assert result.full_text == "hello world"
        assert [t.text for t in result.tokens] == ["hello", "world"]
        assert result.tokens[0].confidence == pytest.approx(0.965)
        assert result.tokens[0].bbox == (5, 5, 40, 10)
        assert result.engine_id.startswith("stub-engine/")

    def test_negative_confidence_rows_dropped(self, ground_truth_doc, stub_engine):
        image = ground_truth_doc("ignored")
        result = ocr.run_ocr(image, external_config(stub_engine))
        assert all(t.confidence >= 0 for t in result.tokens)

    def test_custom_tsv_lines(self, ground_truth_doc, stub_engine):
        image = ground_truth_doc("ignored")
        header = "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext"
        rows = [header,
                "5\t1\t1\t1\t1\t1\t0\t0\t5\t5\t90\tराम",
                "5\t1\t1\t1\t1\t2\t6\t0\t5\t5\t80\tघर",
                "5\t1\t1\t1\t2\t1\t0\t8\t5\t5\t70\tगया"]
        image.with_name(image.name + ".tsv").write_text("\n".join(rows), encoding="utf-8")
        result = ocr.run_ocr(image, external_config(stub_engine))
        assert result.full_text == "राम घर\nगया"
        assert result.mean_confidence == pytest.approx(0.8)

    def test_engine_unavailable(self, ground_truth_doc):
        image = ground_truth_doc("x")
        config = external_config("/nonexistent/engine")
        with pytest.raises(EngineUnavailable):
            ocr.run_ocr(image, config)

    def test_engine_timeout(self, ground_truth_doc, stub_engine, monkeypatch):
        monkeypatch.setenv("STUB_SLEEP", "2.0")
        image = ground_truth_doc("x")
        with pytest.raises(EngineTimeout):
            ocr.run_ocr(image, external_config(stub_engine, timeout=0.2))

    def test_unsupported_language(self, ground_truth_doc, stub_engine, monkeypatch):
        monkeypatch.setenv("STUB_FAIL_LANG", "xyz")
        image = ground_truth_doc("x")
        config = ocr.OcrConfig(languages=(get_language("xyz"),),
                               engine=ocr.Engine.EXTERNAL,
                               engine_path=str(stub_engine))
        with pytest.raises(UnsupportedLanguage):
            ocr.run_ocr(image, config)

    def test_concurrency_respects_max_parallel(self, ground_truth_doc, stub_engine,
                                               monkeypatch):
        monkeypatch.setenv("STUB_SLEEP", "0.15")
        images = [ground_truth_doc("x", name=f"doc{i}") for i in range(6)]
        config = external_config(stub_engine, max_parallel=2)
        observed = []

        def worker(image):
            started = time.perf_counter()
            ocr.run_ocr(image, config)
            observed.append((started, time.perf_counter()))

        threads = [threading.Thread(target=worker, args=(img,)) for img in images]
        t0 = time.perf_counter()
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        elapsed = time.perf_counter() - t0
        # 6 jobs of ~0.15s at concurrency 2 need >= 3 batches
        assert elapsed >= 0.4

    @pytest.mark.skipif(shutil.which("tesseract") is None,
                        reason="real OCR engine not installed")
    def test_real_engine_on_rendered_text(self, tmp_path):
        from PIL import Image, ImageDraw

        image_path = tmp_path / "hello.png"
        img = Image.new("RGB", (600, 120), "white")
        draw = ImageDraw.Draw(img)
        draw.text((20, 40), "hello world", fill="black")
        img.save(image_path, dpi=(300, 300))
        config = ocr.OcrConfig(languages=(get_language("eng"),),
                               engine=ocr.Engine.EXTERNAL)
        result = ocr.run_ocr(image_path, config)
        assert cer("hello world", result.full_text) <= 0.05


class TestListSupportedLanguages:
    def test_ground_truth_returns_registry(self):
        tags = ocr.list_supported_languages(ground_truth_config())
        codes = {t.code for t in tags}
        assert {"eng", "hin", "tam", "urd", "ben", "tel"} <= codes
        assert "sat" in codes

    def test_external_intersection(self, stub_engine, monkeypatch):
        monkeypatch.setenv("STUB_LANGS", "eng")
        config = external_config(stub_engine)
        tags = ocr.list_supported_languages(config)
        assert [t.code for t in tags] == ["eng"]

    def test_external_missing_engine(self):
        config = external_config("/nonexistent/engine")
        with pytest.raises(EngineUnavailable):
            ocr.list_supported_languages(config)
