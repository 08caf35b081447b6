"""Copy propagation and constant folding for a small Python subset, used forward to
optimize programs and backward to build semantic-equivalence benchmarks."""

from .parser import parse, parse_file
from .printer import print_program
from .syntax import Program

__all__ = ["Program", "parse", "parse_file", "print_program"]
__version__ = "0.1.0"
