import pytest

from harness.ledger import PacketLedger
from network.consts import DL, UL


def test_packets_complete_in_arrival_order() -> None:
    ledger = PacketLedger()
    ledger.push(0, UL, 0, [100, 50])
    ledger.push(0, UL, 2, [30])

    done = ledger.serve(0, UL, 120, 3)
    assert [(p.size, p.arrival, p.completion) for p in done] == [(100, 0, 3)]
    assert ledger.queued_bits(0, UL) == 60

    done = ledger.serve(0, UL, 60, 4)
    assert [(p.size, p.arrival, p.delay) for p in done] == [(50, 0, 4), (30, 2, 2)]
    assert ledger.queued_bits(0, UL) == 0


def test_packet_split_over_subframes_completes_with_its_last_bit() -> None:
    ledger = PacketLedger()
    ledger.push(1, DL, 5, [1000])
    assert ledger.serve(1, DL, 400, 6) == []
    assert ledger.serve(1, DL, 400, 7) == []
    (packet,) = ledger.serve(1, DL, 200, 8)
    assert packet.delay == 3
    assert packet.throughput(1e-3) == pytest.approx(1000 / 3e-3)


def test_directions_and_users_are_separate_queues() -> None:
    ledger = PacketLedger()
    ledger.push(0, UL, 0, [10])
    ledger.push(0, DL, 0, [20])
    ledger.push(1, UL, 0, [30, 0])
    assert ledger.queued_bits(0, UL) == 10
    assert ledger.queued_bits(0, DL) == 20
    assert ledger.queued_bits(1, UL) == 30
    assert ledger.serve(1, DL, 0, 1) == []


def test_serving_more_than_queued_raises() -> None:
    ledger = PacketLedger()
    ledger.push(0, UL, 0, [10])
    with pytest.raises(ValueError):
        ledger.serve(0, UL, 11, 1)
