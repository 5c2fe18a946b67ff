"""
Numerical and serialization helpers.
"""
from .json import JSONContent, json_encoder, json_decoder, dump_json

__all__ = ("JSONContent", "json_encoder", "json_decoder", "dump_json")
