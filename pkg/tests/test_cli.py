import json

import pytest

from univoque.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSeq:
    def test_extremal_four_letter_prefix(self, capsys):
        code, out, _ = run(capsys, "seq", "M", "--b", "3", "--t", "3", "--count", "10")
        assert code == 0
        assert out.strip() == "3 1 0 3 0 2 3 1 0 2"

    def test_thue_morse(self, capsys):
        code, out, _ = run(capsys, "seq", "thue-morse", "--count", "8")
        assert code == 0
        assert out.strip() == "0 1 1 0 1 0 0 1"

    def test_phi_iterate(self, capsys):
        code, out, _ = run(capsys, "seq", "phi-iterate", "--b", "1", "--t", "1",
                           "--s", "2", "--count", "8")
        assert code == 0
        assert out.strip() == "1 1 0 1 0 0 1 0"

    def test_braunholtz(self, capsys):
        code, out, _ = run(capsys, "seq", "braunholtz", "--count", "12")
        assert code == 0
        assert out.strip() == "2 1 0 2 0 1 2 1 0 1 2 0"

    def test_theta_matches_top_parameters(self, capsys):
        _, theta, _ = run(capsys, "seq", "theta", "--count", "10")
        _, m33, _ = run(capsys, "seq", "M", "--b", "3", "--t", "3", "--count", "10")
        assert theta == m33

    def test_missing_parameters_exit_2(self, capsys):
        code, _, err = run(capsys, "seq", "M", "--count", "4")
        assert code == 2
        assert "required" in err

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "seq", "M", "--b", "2", "--t", "2",
                           "--count", "6", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["symbols"] == [2, 1, 0, 2, 0, 1]

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "seq", "thue-morse", "--count", "3", "--format", "csv")
        assert code == 0
        assert out.splitlines() == ["index,letter", "0,0", "1,1", "2,1"]


class TestCheck:
    def test_constant_midpoint_not_admissible(self, capsys):
        code, out, _ = run(capsys, "check", "admissible", "--b", "2", "--word", "1^∞")
        assert code == 1
        assert "refuted" in out

    def test_seed_word_in_gamma(self, capsys):
        code, out, _ = run(capsys, "check", "gamma", "--b", "1", "--t", "1",
                           "--word", "(10)*")
        assert code == 0
        assert "member" in out

    def test_square_free_default_stream(self, capsys):
        code, out, _ = run(capsys, "check", "square-free", "--b", "2", "--t", "2",
                           "--horizon", "10000")
        assert code == 0
        assert "square-free" in out

    def test_gamma_strict_closed_form(self, capsys):
        code, out, _ = run(capsys, "check", "gamma-strict", "--b", "3", "--t", "3",
                           "--horizon", "500")
        assert code == 0
        assert "verified up to horizon 500" in out

    def test_gamma_strict_word_refuted(self, capsys):
        code, out, _ = run(capsys, "check", "gamma-strict", "--b", "1", "--t", "1",
                           "--word", "(1 0)*")
        assert code == 1

    def test_stream_descriptor_input(self, capsys):
        descriptor = json.dumps({
            "kind": "thue-morse-closed-form",
            "alphabet": {"lo": 0, "hi": 2},
            "parameters": {"b": 2, "t": 2},
        })
        code, _, _ = run(capsys, "check", "admissible", "--b", "2",
                         "--stream", descriptor)
        assert code == 0

    def test_letter_out_of_range_exit_2(self, capsys):
        code, _, err = run(capsys, "check", "admissible", "--b", "2", "--word", "3^inf")
        assert code == 2
        assert "error" in err

    def test_json_verdict_schema(self, capsys):
        code, out, _ = run(capsys, "check", "gamma", "--b", "1", "--t", "1",
                           "--word", "(10)*", "--format", "json")
        assert code == 0
        assert set(json.loads(out)) == {"status", "witness_shift", "witness_index", "horizon"}


class TestSmallest:
    def test_admissible_sequence(self, capsys):
        code, out, _ = run(capsys, "smallest", "admissible-sequence", "--b", "2",
                           "--count", "12")
        assert code == 0
        assert out.strip() == "2 1 0 2 0 1 2 1 0 1 2 0"

    def test_univoque_number_plain(self, capsys):
        code, out, _ = run(capsys, "smallest", "univoque-number", "--b", "1",
                           "--tol", "1e-25")
        assert code == 0
        assert "lambda_lo: 1.787231650" in out
        assert "digits: 1 1 0 1 0 0" in out

    def test_univoque_number_json(self, capsys):
        code, out, _ = run(capsys, "smallest", "univoque-number", "--b", "4",
                           "--tol", "1e-25", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["lambda_lo"].startswith("4.")
        assert payload["lambda_hi"].startswith("4.")


class TestSolve:
    def test_seed_digits_give_golden_ratio(self, capsys):
        code, out, _ = run(capsys, "solve", "--word", "(1 0)*", "--b", "1")
        assert code == 0
        assert "lambda_lo: 1.618033988749894848" in out

    def test_needs_digits(self, capsys):
        code, _, err = run(capsys, "solve", "--b", "1")
        assert code == 2


class TestVerify:
    def test_equivalence_small(self, capsys):
        code, out, _ = run(capsys, "verify", "equivalence", "--b", "1..2", "--len", "6")
        assert code == 0
        assert "all cells pass" in out

    def test_phi_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "phi-vs-closed-form", "--b", "1..2",
                           "--s", "1..6")
        assert code == 0

    def test_identity_single_cell(self, capsys):
        code, out, _ = run(capsys, "verify", "identity", "--b", "1", "--tol", "1e-35")
        assert code == 0
        assert "PASS" in out

    def test_roundtrip_single_cell(self, capsys):
        code, out, _ = run(capsys, "verify", "roundtrip", "--b", "2", "--tol", "1e-30")
        assert code == 0

    def test_bad_range_exit_2(self, capsys):
        code, _, err = run(capsys, "verify", "identity", "--b", "3..1")
        assert code == 2


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("seq", "M", "--b", "3", "--t", "2", "--count", "16", "--format", "json"),
        ("check", "gamma", "--b", "2", "--t", "2", "--word", "(2 0)*", "--format", "json"),
        ("smallest", "univoque-number", "--b", "2", "--tol", "1e-20", "--format", "json"),
    ])
    def test_json_output_is_byte_identical(self, capsys, argv):
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second
