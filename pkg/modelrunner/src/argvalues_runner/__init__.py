"""Model runner for the argvalues pipeline.

Trains the two-phase entailment model (NLI pre-training, then fine-tuning
on the synthesized pair dataset) and the two multi-label classifiers (the
20-category baseline and the 12-class reduced variant), and runs batch
inference that writes prediction files in exactly the formats the pipeline
toolkit consumes. The file formats are the only coupling between the two
packages.
"""

__version__ = "0.1.0"
