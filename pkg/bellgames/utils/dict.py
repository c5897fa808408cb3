from typing import Any


class AttrDict(dict):
    """
    A dict whose keys can also be read and written as attributes (``report.results.bound``).
    """

    def __getattr__(self, item: str) -> Any:
        try:
            return self.__getitem__(item)
        except KeyError:
            raise AttributeError(item) from None

    def __setattr__(self, key: str, value: Any) -> None:
        self.__setitem__(key, value)
