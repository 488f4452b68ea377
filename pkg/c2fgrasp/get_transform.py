from typing import Any, List, Tuple, Union

from .codec import DecodeVolume, EncodeLabels
from .data_type import is_listlike
from .metrics import NMS, TopK
from .transforms import Transform, NullTransform

__all__ = ['get', 'Compose']

_TRANSFORMS = {"decode": DecodeVolume,
               "encode": EncodeLabels,
               "nms": NMS,
               "topk": TopK}


class Compose(Transform):
    """Chain transforms; a tuple result is unpacked into the next call."""

    def __init__(self, *transforms: Union[str, Transform, None, List, Tuple, "Compose"]):
        super().__init__()
        self.transforms = [get(transform) for transform in transforms]

    def __call__(self, *inputs: Any):
        inputs = inputs[0] if len(inputs) == 1 else inputs
        for transform in self.transforms:
            if isinstance(inputs, tuple):
                inputs = transform(*inputs)
            else:
                inputs = transform(inputs)
        return inputs

    def add(self, transform: Union[str, Transform, None, List, Tuple, "Compose"]) -> None:
        self.transforms.append(get(transform))

    def pop(self, index: int = -1) -> Transform:
        """Remove and return the transform at `index` (default last)."""
        return self.transforms.pop(index)

    def __len__(self) -> int:
        return len(self.transforms)

    def extra_repr(self) -> str:
        format_string = ""
        for t in self.transforms:
            format_string += f'\n    {t}'
        return format_string


def get(transform: Union[str, Transform, None, List, Tuple, "Compose"]) -> Transform:
    if is_listlike(transform):
        return Compose(*transform)

    if isinstance(transform, Transform) or callable(transform):
        return transform
    elif transform is None:
        return NullTransform()
    _transform = _TRANSFORMS.get(str(transform).lower(), None)
    if _transform is None:
        raise ValueError(
            f"Unknown transform: '{transform}', expected one of {sorted(_TRANSFORMS)}, "
            "a callable or None.")
    return _transform()
