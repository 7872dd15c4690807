"""FIFO packet bookkeeping behind the packet throughput metric."""

from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, Iterable, List, Tuple


@dataclass(frozen=True)
class CompletedPacket:
    user: int
    direction: str
    size: int
    arrival: int
    completion: int

    @property
    def delay(self) -> int:
        """Subframes from arrival to the subframe carrying the last bit."""
        return self.completion - self.arrival

    def throughput(self, subframe_duration: float) -> float:
        """Packet size over its delay, in bits per second."""
        return self.size / (self.delay * subframe_duration)


class _Packet:
    __slots__ = ("size", "remaining", "arrival")

    def __init__(self, size: int, arrival: int) -> None:
        self.size = size
        self.remaining = size
        self.arrival = arrival


class PacketLedger:
    """
    Packets waiting in each (user, direction) queue, oldest first.

    Service is fluid within a packet: a packet may be split over several
    subframes and completes in the subframe its last bit is served.
    """

    def __init__(self) -> None:
        self._queues: Dict[Tuple[int, str], Deque[_Packet]] = {}

    def push(self, user: int, direction: str, subframe: int, sizes: Iterable[int]) -> None:
        queue = self._queues.setdefault((user, direction), deque())
        for size in sizes:
            if size > 0:
                queue.append(_Packet(int(size), subframe))

    def queued_bits(self, user: int, direction: str) -> int:
        return sum(p.remaining for p in self._queues.get((user, direction), ()))

    def serve(self, user: int, direction: str, bits: int, subframe: int) -> List[CompletedPacket]:
        queue = self._queues.get((user, direction))
        completed: List[CompletedPacket] = []
        while bits > 0 and queue:
            head = queue[0]
            taken = min(bits, head.remaining)
            head.remaining -= taken
            bits -= taken
            if head.remaining == 0:
                queue.popleft()
                completed.append(
                    CompletedPacket(
                        user=user, direction=direction, size=head.size, arrival=head.arrival, completion=subframe
                    )
                )
        if bits > 0:
            raise ValueError(f"Served {bits} more bits than user {user} has queued in {direction}")
        return completed
