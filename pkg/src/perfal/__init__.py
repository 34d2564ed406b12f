"""perfal: FA-AST graphs, whole-graph embeddings, and actively learned
Gaussian-process models of test execution time."""

__version__ = "0.1.0"
