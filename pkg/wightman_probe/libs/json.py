"""
JSON encoding and decoding on top of orjson.
"""
from typing import Any, Union
from pathlib import Path
from dataclasses import is_dataclass, asdict
import numpy as np
import orjson


JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def _complex(value: complex) -> dict:
    return {"re": float(value.real), "im": float(value.imag)}


class JSONContent:
    """
    Callable encoder; complex numbers become {"re": x, "im": y}.
    """

    def __init__(self, *args, options: int = JSON_OPTIONS, **kwargs):
        self.options = options

    def default(self, obj: Any) -> Any:
        if isinstance(obj, (complex, np.complexfloating)):
            return _complex(complex(obj))
        if isinstance(obj, np.ndarray):
            if np.iscomplexobj(obj):
                return [_complex(v) for v in obj.ravel()]
            return obj.tolist()
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, Path):
            return str(obj)
        if hasattr(obj, "to_dict"):
            return obj.to_dict()
        if is_dataclass(obj):
            return asdict(obj)
        raise TypeError(f"{type(obj)!r} is not JSON serializable")

    def encode(self, obj: Any) -> bytes:
        return orjson.dumps(obj, option=self.options, default=self.default)

    def __call__(self, obj: Any) -> str:
        return self.encode(obj).decode("utf-8")


_encoder = JSONContent()


def json_encoder(obj: Any) -> str:
    return _encoder(obj)


def json_decoder(content: Union[str, bytes]) -> Any:
    return orjson.loads(content)


def dump_json(obj: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_bytes(_encoder.encode(obj) + b"\n")
    return path
