"""
工作池
求積被積函數是 Python 閉包，執行緒會被 GIL 序列化，因此以行程平行；
結果依輸入順序回傳，與工作數無關
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """fn 與 items 需可 pickle：模組層級函式或其 functools.partial"""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as executor:
        return list(executor.map(fn, items))
