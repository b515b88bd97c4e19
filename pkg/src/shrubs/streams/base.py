from dataclasses import dataclass

from ..errors import DomainError


@dataclass(frozen=True)
class StreamSchema:
    n_features: int
    n_classes: int
    name: str = ""

    def __post_init__(self):
        if self.n_features < 1:
            raise DomainError("a stream needs at least one feature")
        if self.n_classes < 2:
            raise DomainError("a stream needs at least two classes")


class Generator:
    """Base for infinite synthetic streams.

    Subclasses implement ``_draw(t)`` returning a :class:`Sample` for item
    index ``t``; ``t`` advances by one per emitted sample.
    """

    schema: StreamSchema

    def __init__(self):
        self.t = 0

    def next_sample(self):
        sample = self._draw(self.t)
        self.t += 1
        return sample

    def __iter__(self):
        while True:
            yield self.next_sample()

    def take(self, n):
        return [self.next_sample() for _ in range(n)]
