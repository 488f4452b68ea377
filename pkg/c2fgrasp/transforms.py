from typing import Any

__all__ = ['Transform', 'NullTransform']


class Transform:
    """Callable processing step with a readable repr, composable via `Compose`."""

    def __init__(self):
        super().__init__()

    def __call__(self, *args, **kwargs) -> Any:
        raise NotImplementedError

    def extra_repr(self) -> str:
        return ""

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.extra_repr()})"


class NullTransform(Transform):

    def __call__(self, *inputs):
        if len(inputs) == 1:
            return inputs[0]
        return inputs
