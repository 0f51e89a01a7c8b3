"""Versioned JSON persistence for trained ensembles.

Numbers are serialized with Python's shortest round-trip float repr, so a
loaded model reproduces the saved model's predictions bit for bit. A
checksum over the canonical float64 bytes of every numeric leaf guards
against files that were re-serialized with reduced precision.
"""

import hashlib
import json
import struct
from typing import Iterable, List

import numpy as np

from . import rng
from .classifier import FansConfig, FansModel, SubModel
from .errors import ModelFormatError
from .kde import BandwidthRule, MarginalDensityEstimate
from .plr import PlrModel
from .transform import DensityPair, Variant

FORMAT_VERSION = 1


def _estimate_doc(est: MarginalDensityEstimate) -> dict:
    if est.cap != 1.0 / est.floor:
        raise ModelFormatError(
            "only the default cap = 1/floor relation can be persisted"
        )
    return {
        "bandwidth": est.bandwidth,
        "floor": est.floor,
        "samples": est.samples.tolist(),
    }


def _submodel_doc(sm: SubModel) -> dict:
    return {
        "lambda": sm.model.lam,
        "intercept": sm.model.intercept,
        "coefficients": sm.model.coefficients.tolist(),
        "densities": {
            "class1": [_estimate_doc(e) for e in sm.densities.class1],
            "class0": [_estimate_doc(e) for e in sm.densities.class0],
        },
    }


def _numeric_leaves(doc: dict) -> Iterable[float]:
    yield float(doc["p"])
    for sub in doc["submodels"]:
        yield float(sub["lambda"])
        yield float(sub["intercept"])
        yield from (float(c) for c in sub["coefficients"])
        for side in ("class1", "class0"):
            for est in sub["densities"][side]:
                yield float(est["bandwidth"])
                yield float(est["floor"])
                yield from (float(s) for s in est["samples"])


def _checksum(doc: dict) -> str:
    digest = hashlib.sha256()
    for value in _numeric_leaves(doc):
        digest.update(struct.pack("<d", value))
    return digest.hexdigest()


def _config_doc(config: FansConfig) -> dict:
    return {
        "variant": config.variant.value,
        "n_splits": config.n_splits,
        "paired": config.paired,
        "floor": config.floor,
        "bandwidth": config.bandwidth.spec_string(),
        "path_length": config.path_length,
        "path_ratio": config.path_ratio,
        "cv_folds": config.cv_folds,
        "seed": config.seed,
        "workers": config.workers,
        "rng": rng.GENERATOR_NAME,
    }


def save_model(model: FansModel, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "variant": model.variant.value,
        "config": _config_doc(model.config),
        "p": model.feature_count,
        "submodels": [_submodel_doc(sm) for sm in model.submodels],
    }
    doc["checksum"] = _checksum(doc)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def _load_estimate(doc: dict) -> MarginalDensityEstimate:
    floor = float(doc["floor"])
    return MarginalDensityEstimate(
        samples=np.asarray(doc["samples"], dtype=np.float64),
        bandwidth=float(doc["bandwidth"]),
        floor=floor,
        cap=1.0 / floor,
    )


def load_model(path) -> FansModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not a valid model file ({exc})") from None
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise ModelFormatError(f"{path}: missing format_version")
    if doc["format_version"] != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: format version {doc['format_version']} is not supported "
            f"(expected {FORMAT_VERSION})"
        )
    try:
        config_doc = dict(doc["config"])
        recorded_rng = config_doc.pop("rng")
        config = FansConfig(
            variant=Variant.parse(config_doc.pop("variant")),
            bandwidth=BandwidthRule.parse(config_doc.pop("bandwidth")),
            **config_doc,
        )
        p = int(doc["p"])
        submodels: List[SubModel] = []
        for sub in doc["submodels"]:
            dp = DensityPair(
                class1=tuple(_load_estimate(e) for e in sub["densities"]["class1"]),
                class0=tuple(_load_estimate(e) for e in sub["densities"]["class0"]),
            )
            plr_model = PlrModel(
                intercept=float(sub["intercept"]),
                coefficients=np.asarray(sub["coefficients"], dtype=np.float64),
                lam=float(sub["lambda"]),
            )
            submodels.append(SubModel(densities=dp, model=plr_model))
        stored_checksum = doc["checksum"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path}: malformed model document ({exc})") from None
    if recorded_rng != rng.GENERATOR_NAME:
        raise ModelFormatError(
            f"{path}: model was produced with generator {recorded_rng!r}, "
            f"this build uses {rng.GENERATOR_NAME!r}"
        )
    if _checksum(doc) != stored_checksum:
        raise ModelFormatError(
            f"{path}: checksum mismatch; the file was altered or re-serialized "
            "with reduced precision"
        )
    return FansModel(config=config, feature_count=p, submodels=submodels)
