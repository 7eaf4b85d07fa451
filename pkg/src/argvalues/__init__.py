"""Pipeline toolkit for detecting human values in written arguments.

Covers the full offline workflow around the models: parsing the shared-task
corpus files, synthesizing the textual-entailment training pairs, mapping
between label granularities, combining model predictions into the four
result-set schemes, and scoring run files with the task metric. Model
inference itself lives behind a plain file interface (see the companion
`modelrunner` package and the built-in stub predictors).
"""

__version__ = "0.1.0"
