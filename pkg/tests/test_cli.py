from click.testing import CliRunner

from axiomforge.cli import main
from conftest import FIXTURE_DIR, SOCIOLOGY

ACME_SCRIPT = f"var p {SOCIOLOGY}#Person\nrefine p.hasEmployer inst {SOCIOLOGY}#Acme\n"
ACME_TEXT = "definedBy ?person memberOf Person and ?person[hasEmployer hasValue Acme]"


def invoke(*args):
    return CliRunner().invoke(main, list(args))


class TestLint:
    def test_valid_file_exits_zero(self):
        result = invoke("lint", str(FIXTURE_DIR / "sociology.wsml"))
        assert result.exit_code == 0
        assert "ok" in result.output

    def test_errors_exit_nonzero(self, tmp_path):
        bad = tmp_path / "bad.wsml"
        bad.write_text('ontology _"http://x.org/a"\nconcept A\nconcept A\n')
        result = invoke("lint", str(bad))
        assert result.exit_code == 1
        assert "duplicate" in result.output


class TestBuildEmitRoundtrip:
    def test_build_prints_text(self, tmp_path):
        script = tmp_path / "acme.axs"
        script.write_text(ACME_SCRIPT)
        result = invoke("build", str(script), "--ontology-store", str(FIXTURE_DIR))
        assert result.exit_code == 0
        assert result.output.strip() == ACME_TEXT

    def test_build_rejection_exits_nonzero(self, tmp_path):
        script = tmp_path / "bad.axs"
        script.write_text(f"var p {SOCIOLOGY}#Person\nrefine p.hasEmployer default\nrefine p.hasEmployer default\n")
        result = invoke("build", str(script), "--ontology-store", str(FIXTURE_DIR))
        assert result.exit_code == 1
        assert "line 3" in result.output

    def test_build_save_then_emit_and_roundtrip(self, tmp_path):
        script = tmp_path / "acme.axs"
        script.write_text(ACME_SCRIPT)
        saved = tmp_path / "acme.axiom.json"
        assert invoke(
            "build", str(script), "--ontology-store", str(FIXTURE_DIR), "--save", str(saved)
        ).exit_code == 0
        emitted = invoke("emit", str(saved), "--ontology-store", str(FIXTURE_DIR))
        assert emitted.output.strip() == ACME_TEXT
        stable = invoke("roundtrip", str(saved), "--ontology-store", str(FIXTURE_DIR))
        assert stable.output.strip() == "stable"

    def test_pretty_flag(self, tmp_path):
        script = tmp_path / "acme.axs"
        script.write_text(ACME_SCRIPT)
        result = invoke("build", str(script), "--ontology-store", str(FIXTURE_DIR), "--pretty")
        assert result.output.startswith("definedBy\n  ")
