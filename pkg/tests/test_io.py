"""Record and table serialization.

Round trips are the oracle here: CSV -> JSON -> CSV must be byte-stable
for finite fields, and the special encodings (empty/None accuracy, "inf"
rejection quality) must survive a write/parse cycle.
"""

import json
import math

import numpy as np
import pytest

from reject_metrics import OperatingPoint
from reject_metrics.exceptions import DataFormatError
from reject_metrics.io import (
    CSV_HEADER,
    PredictionRecord,
    RunReport,
    curve_csv_text,
    format_float,
    input_digest,
    matrix_csv_text,
    parse_curve_csv,
    parse_phi,
    phi_for_csv,
    phi_for_json,
    point_to_dict,
    read_records,
    read_records_csv,
    read_records_json,
    records_have_rejected,
    records_to_predictions,
    write_records_csv,
    write_records_json,
)

SAMPLE = [
    PredictionRecord(id="s1", y_true=1, y_pred=1, confidence=0.9375),
    PredictionRecord(id="s2", y_true=2, y_pred=3, confidence=0.1),
    PredictionRecord(id="s3", y_true=4, y_pred=4, confidence=None),
]

SAMPLE_REJECTED = [
    PredictionRecord(id="s1", y_true=1, y_pred=1, confidence=0.9, rejected=0),
    PredictionRecord(id="s2", y_true=2, y_pred=3, confidence=0.1, rejected=1),
]


class TestRecordRoundTrips:
    def test_csv_round_trip(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_records_csv(SAMPLE, path)
        assert read_records_csv(path) == SAMPLE

    def test_json_round_trip(self, tmp_path):
        path = tmp_path / "preds.json"
        write_records_json(SAMPLE_REJECTED, path)
        assert read_records_json(path) == SAMPLE_REJECTED

    def test_cross_format_round_trip_is_byte_stable(self, tmp_path):
        csv1 = tmp_path / "a.csv"
        jsn = tmp_path / "a.json"
        csv2 = tmp_path / "b.csv"
        write_records_csv(SAMPLE, csv1)
        write_records_json(read_records_csv(csv1), jsn)
        write_records_csv(read_records_json(jsn), csv2)
        assert csv1.read_bytes() == csv2.read_bytes()

    def test_dispatch_by_extension(self, tmp_path):
        jsn = tmp_path / "preds.JSON"
        write_records_json(SAMPLE, jsn)
        assert read_records(jsn) == SAMPLE
        csvp = tmp_path / "preds.csv"
        write_records_csv(SAMPLE, csvp)
        assert read_records(csvp) == SAMPLE

    def test_json_records_wrapper_accepted(self, tmp_path):
        path = tmp_path / "preds.json"
        payload = {"records": [{"id": "a", "y_true": 1, "y_pred": 2, "confidence": None}]}
        path.write_text(json.dumps(payload))
        recs = read_records_json(path)
        assert recs[0].y_pred == 2 and recs[0].confidence is None


class TestMalformedInputs:
    def make(self, tmp_path, text):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        return path

    def test_wrong_header(self, tmp_path):
        path = self.make(tmp_path, "sample,truth,guess,score\n1,1,1,0.5\n")
        with pytest.raises(DataFormatError, match="header"):
            read_records_csv(path)

    def test_field_count_names_the_line(self, tmp_path):
        path = self.make(tmp_path, "id,y_true,y_pred,confidence\na,1,1,0.5\nb,2,2\n")
        with pytest.raises(DataFormatError, match="line 3"):
            read_records_csv(path)

    def test_zero_label_reserved(self, tmp_path):
        path = self.make(tmp_path, "id,y_true,y_pred,confidence\na,0,1,0.5\n")
        with pytest.raises(DataFormatError, match="reserved for rejection"):
            read_records_csv(path)

    def test_bad_confidence(self, tmp_path):
        path = self.make(tmp_path, "id,y_true,y_pred,confidence\na,1,1,high\n")
        with pytest.raises(DataFormatError, match="not a number"):
            read_records_csv(path)

    def test_bad_rejected_flag(self, tmp_path):
        path = self.make(tmp_path, "id,y_true,y_pred,confidence,rejected\na,1,1,0.5,2\n")
        with pytest.raises(DataFormatError, match="rejected must be 0 or 1"):
            read_records_csv(path)

    def test_empty_and_headers_only(self, tmp_path):
        with pytest.raises(DataFormatError, match="empty"):
            read_records_csv(self.make(tmp_path, ""))
        with pytest.raises(DataFormatError, match="no data rows"):
            read_records_csv(self.make(tmp_path, "id,y_true,y_pred,confidence\n"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(DataFormatError, match="invalid JSON"):
            read_records_json(path)

    def test_mixed_rejected_presence(self):
        recs = [
            PredictionRecord(id="a", y_true=1, y_pred=1, rejected=1),
            PredictionRecord(id="b", y_true=1, y_pred=1),
        ]
        with pytest.raises(DataFormatError, match="some records but not all"):
            records_have_rejected(recs)


class TestRecordsToPredictions:
    def test_arrays_and_mask(self):
        preds, mask = records_to_predictions(SAMPLE_REJECTED)
        assert preds.y_true.tolist() == [1, 2]
        assert preds.y_pred.tolist() == [1, 3]
        assert mask.tolist() == [0, 1]

    def test_missing_confidence_becomes_nan(self):
        preds, mask = records_to_predictions(SAMPLE)
        assert mask is None
        assert math.isnan(preds.confidence[2])

    def test_all_missing_confidence_is_none(self):
        recs = [PredictionRecord(id="a", y_true=1, y_pred=1)]
        preds, _ = records_to_predictions(recs)
        assert preds.confidence is None


class TestFloatsAndPhi:
    def test_format_float_round_trips(self):
        for v in (0.1, 1 / 3, 0.65, 11 / 3, 1e-17, 123456.789):
            assert float(format_float(v)) == v

    def test_phi_encodings(self):
        assert phi_for_json(math.inf) == "inf"
        assert phi_for_json(2.5) == 2.5
        assert phi_for_csv(math.inf) == "inf"
        assert parse_phi("inf") == math.inf
        assert parse_phi("3.5") == 3.5


class TestCurveTable:
    points = [
        OperatingPoint(r=0.0, A=0.55, Q=0.55, phi=1.0, n=20),
        OperatingPoint(r=0.5, A=0.7, Q=0.75, phi=math.inf, n=20),
        OperatingPoint(r=1.0, A=None, Q=0.45, phi=1.2, n=20),
    ]

    def test_special_encodings(self, tmp_path):
        text = curve_csv_text(self.points)
        lines = text.splitlines()
        assert lines[0] == "r,A,Q,phi"
        assert lines[2].split(",")[3] == "inf"
        assert lines[3].split(",")[1] == ""

    def test_parse_round_trip(self, tmp_path):
        path = tmp_path / "curve.csv"
        path.write_text(curve_csv_text(self.points))
        rows = parse_curve_csv(path)
        assert rows == [(p.r, p.A, p.Q, p.phi) for p in self.points]

    def test_parse_rejects_foreign_header(self, tmp_path):
        path = tmp_path / "curve.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(DataFormatError, match="header"):
            parse_curve_csv(path)

    def test_point_to_dict_encodings(self):
        d = point_to_dict(self.points[2])
        assert d["A"] is None
        d = point_to_dict(self.points[1])
        assert d["phi"] == "inf"


class TestMatrixTable:
    def test_layout(self):
        text = matrix_csv_text(
            [0.0, 0.5],
            [[None, 0.25], [-0.25, None]],
            [None, 0.625],
        )
        lines = text.splitlines()
        assert lines[0] == "point_r,0.0,0.5,min_rho_no_reject"
        assert lines[1] == "0.0,,0.25,"
        assert lines[2] == "0.5,-0.25,,0.625"


class TestDigest:
    def test_stable_and_sensitive(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("id,y_true,y_pred,confidence\na,1,1,0.5\n")
        d1 = input_digest(p)
        assert d1 == input_digest(p)
        assert len(d1) == 64
        p.write_text("id,y_true,y_pred,confidence\na,1,2,0.5\n")
        assert input_digest(p) != d1


class TestRunReport:
    def test_json_shape(self):
        report = RunReport(meta={"command": "measures"}, points=[{"r": 0.0}])
        payload = json.loads(report.to_json())
        assert payload == {"meta": {"command": "measures"}, "points": [{"r": 0.0}],
                           "comparisons": []}

    def test_matrix_included_when_present(self):
        report = RunReport(meta={}, beta_matrix={"point_r": [0.0]})
        assert "beta_matrix" in report.to_dict()

    def test_trailing_newline(self):
        assert RunReport(meta={}).to_json().endswith("}\n")
