"""Python access to the kgnp logic engine, embeddings and argumentation."""

from ._kgnp import (
    bad_attribute_rates,
    cli,
    gain,
    parse_program,
    poset_compare,
    run,
    synthetic_cardio_csv,
    train_and_evaluate,
)

__all__ = [
    "bad_attribute_rates",
    "cli",
    "gain",
    "parse_program",
    "poset_compare",
    "run",
    "synthetic_cardio_csv",
    "train_and_evaluate",
]
