from .dict import AttrDict
from .rational import fraction_array, parse_fraction, to_float_array

__all__ = [
    "AttrDict",
    "fraction_array",
    "parse_fraction",
    "to_float_array",
]
