import json

import numpy as np
import pytest

from tnormlab.classify import (
    FitError,
    PreconditionError,
    classify,
    fit_beta,
    fit_beta_from_triples,
)
from tnormlab.core import (
    CShelf,
    Expr,
    Minimum,
    Product,
    SchweizerSklar,
    tnorm_values,
)
from tnormlab.rng import SplitMix64

from conftest import FAMILY_MATRIX, MATRIX_IDS, ORDINAL_SUMS

EXPECTED_FAMILY = {
    "min": ("Minimum", None),
    "prod": ("Product", None),
    "drastic": ("Drastic", None),
    "ss:-2": ("SchweizerSklarNeg", -2.0),
    "ss:-1": ("SchweizerSklarNeg", -1.0),
    "ss:-0.5": ("SchweizerSklarNeg", -0.5),
    "ss:0.5": ("SchweizerSklarPos", 0.5),
    "ss:1": ("SchweizerSklarPos", 1.0),
    "ss:2": ("SchweizerSklarPos", 2.0),
    "ss:3": ("SchweizerSklarPos", 3.0),
    "cshelf:0.25": ("CShelf", 0.25),
    "cshelf:0.5": ("CShelf", 0.5),
    "cshelf:0.75": ("CShelf", 0.75),
}


def sample_triples(spec, n, seed=0xBEEF):
    rng = SplitMix64(seed)
    rows = []
    while len(rows) < n:
        x, y = rng.unit_tuples(1, 2)[0]
        t = float(tnorm_values(spec, np.asarray([x]), np.asarray([y]))[0])
        if 0.0 < t < 1.0 and abs(t - x * y) > 1e-6:
            rows.append((x, y, t))
    return np.asarray(rows)


# --------------------------------------------------------------------------
# Exponent fit
# --------------------------------------------------------------------------

@pytest.mark.parametrize("beta", [2.0, -0.5, -2.0, 3.0, 0.5])
def test_fit_recovers_exact_exponent(beta, grid):
    beta_hat, residual = fit_beta(SchweizerSklar(beta), grid)
    assert abs(beta_hat - beta) / abs(beta) <= 1e-6
    assert residual <= grid.eq_tol


def test_fit_product_has_no_informative_samples(grid):
    # every sample sits on t = x*y and is filtered out
    with pytest.raises(FitError):
        fit_beta(Product(), grid)


def test_fit_from_noisy_samples_stays_close():
    for beta in (2.0, -1.0):
        triples = sample_triples(SchweizerSklar(beta), 80)
        noise = SplitMix64(0xD00D).unit_array(len(triples))
        noisy = triples.copy()
        noisy[:, 2] = np.clip(noisy[:, 2] + (noise - 0.5) * 2e-8, 1e-12, 1.0)
        beta_hat = fit_beta_from_triples(noisy)
        assert abs(beta_hat - beta) <= 1e-4


def test_fit_rejects_uninformative_triples():
    # min-shaped samples solve the per-sample equation only at the excluded 0
    rng = SplitMix64(3)
    rows = []
    for _ in range(60):
        x, y = sorted(rng.unit_tuples(1, 2)[0])
        rows.append((x, y, min(x, y)))
    with pytest.raises(FitError):
        fit_beta_from_triples(np.asarray(rows))


# --------------------------------------------------------------------------
# Classification
# --------------------------------------------------------------------------

@pytest.mark.parametrize("name,spec,_", FAMILY_MATRIX, ids=MATRIX_IDS)
def test_classify_matrix_member(name, spec, _, grid):
    result = classify(spec, grid)
    family, parameter = EXPECTED_FAMILY[name]
    assert result.family == family
    if parameter is None:
        assert result.parameter is None
    elif family == "CShelf":
        assert abs(result.parameter - parameter) <= grid.step_h
    else:
        assert abs(result.parameter - parameter) / abs(parameter) <= 1e-6
    assert result.residual <= grid.eq_tol
    validated = [e for e in result.evidence
                 if e["test"].startswith("validate_") and e["passed"]]
    assert len(validated) == 1


def test_classify_lukasiewicz_kind_lands_on_beta_one(grid):
    from tnormlab.core import Lukasiewicz
    result = classify(Lukasiewicz(), grid)
    assert result.family == "SchweizerSklarPos"
    assert abs(result.parameter - 1.0) <= 1e-6


def test_classify_cshelf_offgrid_edge(grid):
    result = classify(CShelf(0.3), grid)
    assert result.family == "CShelf"
    assert abs(result.parameter - 0.3) <= grid.step_h


def test_classify_expression_negative_exponent(grid):
    # rational form of the beta = -1 member; the raw power formula is
    # undefined on the zero boundary, this algebraic rewrite is not
    spec = Expr("x*y/max(x+y-x*y, 1e-300)")
    result = classify(spec, grid)
    assert result.family == "SchweizerSklarNeg"
    assert abs(result.parameter + 1.0) <= 1e-6
    assert result.residual <= 1e-9


@pytest.mark.parametrize("spec", ORDINAL_SUMS,
                         ids=["osum-luk", "osum-prod", "osum-two"])
def test_classify_ordinal_sum_not_gph(spec, grid):
    result = classify(spec, grid)
    assert result.family == "NotGPH"
    assert result.parameter is None
    assert result.residual > grid.eq_tol
    cited = [e for e in result.evidence if e["test"] == "gph_counterexample"]
    assert cited and cited[0]["detail"]["witness"] is not None
    assert not any(e["passed"] for e in result.evidence
                   if e["test"].startswith("validate_"))


def test_classify_requires_axioms(grid):
    with pytest.raises(PreconditionError):
        classify(Expr("x*y/2"), grid)


def test_classification_result_json(grid):
    result = classify(Minimum(), grid)
    payload = json.loads(result.to_json())
    assert list(payload) == ["family", "parameter", "residual", "evidence"]
    assert payload["family"] == "Minimum"
    assert all(list(e) == ["test", "passed", "detail"]
               for e in payload["evidence"])


def test_classify_deterministic(grid):
    a = classify(SchweizerSklar(2), grid)
    b = classify(SchweizerSklar(2), grid)
    assert a.to_json() == b.to_json()
