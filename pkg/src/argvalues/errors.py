"""Error taxonomy shared by all parsers and pipeline stages."""


class DataError(Exception):
    """Fatal problem with input data (malformed file, broken invariant).

    The CLI maps this to exit code 2; usage problems exit with 1 instead.
    """
