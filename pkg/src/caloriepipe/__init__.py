"""Pipeline for turning semi-structured recipe corpora into
nutrition-annotated ML datasets, plus an evaluation kit.

Stages: ingest recipe/food-db files, parse ingredient lines, match names
against the food database with a pluggable similarity provider, resolve
amounts to grams, aggregate per-recipe nutrition, normalize to a basis,
filter outliers, and emit split/labelled samples.
"""

__version__ = "0.1.0"
