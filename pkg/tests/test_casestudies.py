from fractions import Fraction

import pytest
from rich.console import Console

from padiclab.casestudies.powers import iterated_pow_p, xp_experiment
from padiclab.casestudies.report import TSV_COLUMNS, ExperimentReport, agreeing_digits
from padiclab.casestudies.suite import EXPERIMENTS, run_suite
from padiclab.core import PadicScalar


@pytest.mark.parametrize(
    "computed,reference,expected",
    [
        (Fraction(26), Fraction(26), 10),
        (Fraction(26 + 2**7), Fraction(26), 6),
        (Fraction(13), Fraction(26), 0),
        (None, Fraction(1), 0),
        (Fraction(0), Fraction(0), 10),
        (Fraction(1), Fraction(0), 0),
    ],
)
def test_agreeing_digits(two, computed, reference, expected):
    assert agreeing_digits(computed, reference, two, 10) == expected


def test_report_records(two):
    report = ExperimentReport("demo", two)
    report.add_scalar("x", "zealous", PadicScalar.from_rational(5, 6, two), Fraction(5))
    report.add_failure("y", "zealous", "InexactZeroDivision")
    report.add_value("z", "rational", 42)
    assert report.get("x").agreeing == 6
    assert report.get("y").value == "FAIL(InexactZeroDivision)"
    assert report.get("z", "rational").value == "42"
    assert report.average_agreement("zealous") == 6.0
    with pytest.raises(KeyError):
        report.get("x", "pfloat")


def test_report_rendering(two):
    report = ExperimentReport("demo", two)
    report.add_value("z", "rational", 42)
    lines = report.to_tsv().splitlines()
    assert lines[0].split("\t") == list(TSV_COLUMNS)
    assert lines[1] == "z\trational\t42\t-\t-\t-"
    console = Console(record=True, width=120)
    report.print_table(console)
    assert "demo" in console.export_text()


def test_iterated_pow_p_gains_one_digit_per_step(two):
    x = PadicScalar.from_rational(3, 4, two)
    y = iterated_pow_p(x, 3)
    assert y.N == 7
    assert y.residue() == 3**8 % 2**7


def test_xp_experiment(two):
    report = xp_experiment(PadicScalar.from_rational(3, 4, two), 3)
    assert report.get("x^8", "zpow_p").precision == "7"
    assert report.get("x^8", "zealous").precision == "4"


def test_run_suite_subset():
    (report,) = run_suite(["xp"])
    assert report.experiment == "xp"


def test_run_suite_unknown_name():
    with pytest.raises(KeyError):
        run_suite(["xp", "nope"])


def test_every_experiment_is_named():
    assert set(EXPERIMENTS) >= {"det", "charpoly", "lu", "bezout", "somos1111", "somos1113", "xp"}


@pytest.mark.slow
def test_full_suite_in_parallel():
    reports = run_suite(jobs=2)
    assert [r.experiment for r in reports][-1] == "xp"
    assert len(reports) == len(EXPERIMENTS)
