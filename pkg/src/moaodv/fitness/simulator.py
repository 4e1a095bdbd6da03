"""Deterministic discrete-event AODV surrogate.

The model keeps the parts of AODV that the 11 tuning parameters act on:

* HELLO beacons every ``hello_interval``; a neighbour counts as alive while
  it was heard within ``allowed_hello_loss * hello_interval`` seconds.
  Node ``u`` sends its first beacon at ``u * hello_interval / N``.
* Route entries expire: routes learned from an RREP live
  ``my_route_timeout``, reverse routes and every use of a route extend it by
  ``active_route_timeout``.
* Expanding-ring discovery: TTL starts at ``ttl_start`` and grows by
  ``ttl_increment``; past ``ttl_threshold`` it jumps to ``net_diameter``,
  where the request is retried ``req_retries`` more times. An attempt with
  TTL ``t`` waits ``2 * node_traversal_time * (t + 2)`` (ring) or
  ``2 * node_traversal_time * net_diameter * 2**retry`` (network-wide),
  never longer than ``max_rreq_timeout``.
* Data waiting for a route sits in a per-destination buffer and is dropped
  when discovery fails or after ``buffer_timeout``.

The radio is a unit disk evaluated on mobility snapshots. A transmission
takes ``size / channel_rate`` plus a binary exponential backoff whose
window doubles with every neighbour that is busy, and with every MAC
retry. Each busy neighbour also adds an independent ``collision_prob``
chance of losing the frame. Unicast frames are retried ``mac_retries``
times; a unicast that still fails is reported as a link break.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..space import AODV_SPACE, validate_genome
from .scenario import ScenarioConfig, neighbor_snapshots

TIMEOUT_BUFFER = 2
MAX_BACKOFF_EXPONENT = 10

# event kinds
_APP, _HELLO, _RX_BCAST, _RX_UNI, _TX_FAIL, _RREQ_TIMEOUT = range(6)
# packet kinds
DATA, HELLO, RREQ, RREP, RERR = range(5)


@dataclass(frozen=True)
class QosMetrics:
    pdr: float
    e2ed: float
    nrl: float
    sent: int = 0
    delivered: int = 0
    control_packets: int = 0

    def as_dict(self) -> dict:
        return {
            "pdr": self.pdr,
            "e2ed_ms": self.e2ed,
            "nrl": self.nrl,
            "sent": self.sent,
            "delivered": self.delivered,
            "control_packets": self.control_packets,
        }


@dataclass(frozen=True)
class AodvParams:
    hello_interval: float
    active_route_timeout: float
    my_route_timeout: float
    node_traversal_time: float
    max_rreq_timeout: float
    net_diameter: int
    allowed_hello_loss: int
    req_retries: int
    ttl_start: int
    ttl_increment: int
    ttl_threshold: int

    @classmethod
    def from_genome(cls, g) -> "AodvParams":
        g = np.asarray(g, dtype=float)
        if not validate_genome(AODV_SPACE, g):
            raise ValueError(f"genome outside the AODV parameter space: {g.tolist()}")
        reals = [float(v) for v in g[:5]]
        ints = [int(v) for v in g[5:]]
        return cls(*reals, *ints)

    @property
    def hello_timeout(self) -> float:
        return self.allowed_hello_loss * self.hello_interval


class _Simulation:
    def __init__(self, sc: ScenarioConfig, p: AodvParams):
        self.sc = sc
        self.p = p
        n = sc.node_count
        self.snaps = neighbor_snapshots(sc)
        self.dt = sc.snapshot_dt
        self.rng = random.Random(sc.seed * 1_000_003 + 17)
        self.heap: list = []
        self.seq = 0
        self.now = 0.0
        self.bitrate = sc.channel_rate_kbps * 1000.0
        self.ctrl_time = sc.control_size * 8.0 / self.bitrate

        self.busy = [0.0] * n            # transmitter free from
        self.queue = [deque() for _ in range(n)]
        self.heard = [dict() for _ in range(n)]      # neighbour -> last heard
        self.routes = [dict() for _ in range(n)]     # dest -> [next_hop, hops, expiry]
        self.seen = [set() for _ in range(n)]        # (origin, rreq_id)
        self.pending = [dict() for _ in range(n)]    # dest -> [ttl, retries, serial]
        self.buffers = [dict() for _ in range(n)]    # dest -> list of data packets
        self.rreq_id = [0] * n
        self.serial = 0

        self.sent = 0
        self.delivered = 0
        self.delay_sum = 0.0
        self.control = 0

    # -- event plumbing ------------------------------------------------------

    def schedule(self, t, kind, a=None, b=None, c=None):
        self.seq += 1
        heapq.heappush(self.heap, (t, self.seq, kind, a, b, c))

    def neighbors(self, u, t):
        snaps = self.snaps
        k = int(t / self.dt)
        if k >= len(snaps):
            k = len(snaps) - 1
        return snaps[k][u]

    def run(self) -> QosMetrics:
        sc, p = self.sc, self.p
        n = sc.node_count
        for u in range(n):
            self.schedule(u * p.hello_interval / n, _HELLO, u, 0)
        for i, f in enumerate(sc.flows):
            if f.start < min(f.stop or sc.duration, sc.duration):
                self.schedule(f.start, _APP, i, 0)

        heap = self.heap
        end = sc.duration
        handlers = (self.on_app, self.on_hello, self.on_rx_bcast, self.on_rx_uni,
                    self.on_tx_fail, self.on_rreq_timeout)
        while heap:
            t, _, kind, a, b, c = heapq.heappop(heap)
            if t >= end:
                break
            self.now = t
            handlers[kind](a, b, c)

        if self.sent == 0:
            raise ValueError("scenario generated no data packets")
        pdr = 100.0 * self.delivered / self.sent
        if self.delivered:
            e2ed = 1000.0 * self.delay_sum / self.delivered
        else:
            e2ed = 1000.0 * sc.duration
        nrl = self.control / max(self.delivered, 1)
        return QosMetrics(pdr, e2ed, nrl, self.sent, self.delivered, self.control)

    # -- radio -----------------------------------------------------------------

    def _contention(self, u, start, nbrs):
        busy = self.busy
        c = 0
        for v in nbrs:
            if busy[v] > start:
                c += 1
        return c

    def _enqueue(self, u):
        q = self.queue[u]
        now = self.now
        while q and q[0] <= now:
            q.popleft()
        if len(q) >= self.sc.queue_limit:
            return None
        return max(now, self.busy[u])

    def broadcast(self, u, size_time, pkt):
        start = self._enqueue(u)
        if start is None:
            return
        nbrs = self.neighbors(u, start)
        c = self._contention(u, start, nbrs)
        rng = self.rng
        t = start
        if c and self.sc.backoff_slot > 0:
            t += self.sc.backoff_slot * int(rng.random() * (1 << min(c, MAX_BACKOFF_EXPONENT)))
        t += size_time
        self.busy[u] = t
        self.queue[u].append(t)
        if c and self.sc.collision_prob > 0:
            keep = (1.0 - self.sc.collision_prob) ** c
            receivers = [v for v in nbrs if rng.random() < keep]
        else:
            receivers = list(nbrs)
        if receivers:
            self.schedule(t, _RX_BCAST, u, pkt, receivers)

    def unicast(self, u, v, size_time, pkt):
        start = self._enqueue(u)
        if start is None:
            if pkt[0] == DATA:
                return False
            return True
        nbrs = self.neighbors(u, start)
        c = self._contention(u, start, nbrs)
        in_range = v in nbrs
        sc, rng = self.sc, self.rng
        keep = (1.0 - sc.collision_prob) ** c if c else 1.0
        t = start
        ok = False
        for attempt in range(sc.mac_retries + 1):
            e = c + attempt
            if e and sc.backoff_slot > 0:
                t += sc.backoff_slot * int(rng.random() * (1 << min(e, MAX_BACKOFF_EXPONENT)))
            t += size_time
            if in_range and (keep >= 1.0 or rng.random() < keep):
                ok = True
                break
            if not in_range:
                # nothing can answer; burn the retries without further draws
                continue
        self.busy[u] = t
        self.queue[u].append(t)
        if ok:
            self.schedule(t, _RX_UNI, u, v, pkt)
        else:
            self.schedule(t, _TX_FAIL, u, v, pkt)
        return True

    def data_time(self, pkt):
        return pkt[4] * 8.0 / self.bitrate

    # -- neighbour and route bookkeeping ---------------------------------------

    def hear(self, v, u, lifetime):
        """Node ``v`` received a control frame from neighbour ``u``."""
        now = self.now
        self.heard[v][u] = now
        r = self.routes[v].get(u)
        expiry = now + lifetime
        if r is None or r[2] <= now:
            self.routes[v][u] = [u, 1, expiry]
        elif r[0] == u:
            r[1] = 1
            if expiry > r[2]:
                r[2] = expiry
        # a valid multi-hop route to u is left alone

    def alive(self, u, v):
        last = self.heard[u].get(v)
        return last is not None and self.now - last <= self.p.hello_timeout

    def valid_route(self, u, dest):
        r = self.routes[u].get(dest)
        if r is not None and r[2] > self.now:
            return r
        return None

    def break_link(self, u, v):
        """Invalidate every route at ``u`` that goes through ``v``."""
        self.heard[u].pop(v, None)
        for r in self.routes[u].values():
            if r[0] == v:
                r[2] = -1.0

    # -- data plane ------------------------------------------------------------

    def on_app(self, i, k, _):
        f = self.sc.flows[i]
        stop = min(f.stop if f.stop is not None else self.sc.duration, self.sc.duration)
        nxt = f.start + (k + 1) * f.interval
        if nxt < stop:
            self.schedule(nxt, _APP, i, k + 1)
        self.sent += 1
        # [kind, source, destination, created, size, path]
        pkt = [DATA, f.source, f.destination, self.now, f.packet_size, (f.source,)]
        self.route_output(f.source, pkt)

    def route_output(self, u, pkt):
        dest = pkt[2]
        r = self.valid_route(u, dest)
        if r is not None and self.alive(u, r[0]):
            self.forward(u, r, pkt)
            return
        if r is not None:
            self.break_link(u, r[0])
        buf = self.buffers[u].setdefault(dest, [])
        if len(buf) >= self.sc.buffer_limit:
            return
        buf.append(pkt)
        if dest not in self.pending[u]:
            self.start_discovery(u, dest)

    def forward(self, u, r, pkt):
        renew = self.now + self.p.active_route_timeout
        if renew > r[2]:
            r[2] = renew
        if not self.unicast(u, r[0], self.data_time(pkt), pkt):
            return  # interface queue overflow

    def on_rx_uni(self, u, v, pkt):
        kind = pkt[0]
        self.heard[v][u] = self.now
        if kind == DATA:
            self.on_data(v, pkt)
        elif kind == RREP:
            self.hear(v, u, self.p.active_route_timeout)
            self.on_rrep(u, v, pkt)
        elif kind == RERR:
            self.hear(v, u, self.p.active_route_timeout)
            self.on_rerr(u, v, pkt)

    def on_data(self, v, pkt):
        if v == pkt[2]:
            self.delivered += 1
            self.delay_sum += self.now - pkt[3]
            return
        pkt = [DATA, pkt[1], pkt[2], pkt[3], pkt[4], pkt[5] + (v,)]
        r = self.valid_route(v, pkt[2])
        if r is not None and self.alive(v, r[0]):
            self.forward(v, r, pkt)
            return
        if r is not None:
            self.break_link(v, r[0])
        self.send_rerr(v, pkt)

    def on_tx_fail(self, u, v, pkt):
        self.break_link(u, v)
        if pkt[0] != DATA:
            return
        if u == pkt[1]:
            # the source keeps the packet and rediscovers
            self.route_output(u, pkt)
        else:
            self.send_rerr(u, pkt)

    def send_rerr(self, u, pkt):
        """Report the broken route for ``pkt`` back along the path it came from."""
        back = pkt[5]
        if back and back[-1] == u:
            back = back[:-1]
        if not back:
            return
        self.control += 1
        self.unicast(u, back[-1], self.ctrl_time, (RERR, pkt[2], back[:-1]))

    def on_rerr(self, sender, v, pkt):
        _, dest, back = pkt
        r = self.routes[v].get(dest)
        if r is not None and r[0] == sender:
            r[2] = -1.0
        if back:
            self.control += 1
            self.unicast(v, back[-1], self.ctrl_time, (RERR, dest, back[:-1]))

    # -- route discovery -------------------------------------------------------

    def start_discovery(self, u, dest):
        p = self.p
        ttl = min(p.ttl_start, p.net_diameter)
        self.pending[u][dest] = [ttl, 0, 0]
        self.send_rreq(u, dest)

    def rreq_wait(self, ttl, retries):
        p = self.p
        if ttl < p.net_diameter:
            wait = 2.0 * p.node_traversal_time * (ttl + TIMEOUT_BUFFER)
        else:
            wait = 2.0 * p.node_traversal_time * p.net_diameter * (2 ** retries)
        return min(wait, p.max_rreq_timeout)

    def send_rreq(self, u, dest):
        state = self.pending[u][dest]
        ttl, retries, _ = state
        self.serial += 1
        state[2] = self.serial
        self.rreq_id[u] += 1
        rid = self.rreq_id[u]
        self.seen[u].add((u, rid))
        self.control += 1
        self.broadcast(u, self.ctrl_time, (RREQ, u, rid, dest, ttl, 0))
        self.schedule(self.now + self.rreq_wait(ttl, retries), _RREQ_TIMEOUT, u, dest, self.serial)

    def purge_buffer(self, u, dest):
        buf = self.buffers[u].get(dest)
        if buf:
            limit = self.now - self.sc.buffer_timeout
            buf[:] = [pkt for pkt in buf if pkt[3] >= limit]

    def on_rreq_timeout(self, u, dest, serial):
        state = self.pending[u].get(dest)
        if state is None or state[2] != serial:
            return
        self.purge_buffer(u, dest)
        if not self.buffers[u].get(dest):
            del self.pending[u][dest]
            return
        p = self.p
        ttl, retries, _ = state
        if ttl < p.net_diameter:
            ttl += p.ttl_increment
            if ttl > p.ttl_threshold:
                ttl = p.net_diameter
            state[0] = min(ttl, p.net_diameter)
        else:
            retries += 1
            if retries > p.req_retries:
                del self.pending[u][dest]
                self.buffers[u].pop(dest, None)
                return
            state[1] = retries
        self.send_rreq(u, dest)

    def on_rx_bcast(self, u, pkt, receivers):
        kind = pkt[0]
        if kind == HELLO:
            lifetime = self.p.hello_timeout
            for v in receivers:
                self.hear(v, u, lifetime)
            return
        lifetime = self.p.active_route_timeout
        for v in receivers:
            self.hear(v, u, lifetime)
            if kind == RREQ:
                self.on_rreq(u, v, pkt)

    def on_hello(self, u, j, _):
        p = self.p
        nxt = u * p.hello_interval / self.sc.node_count + (j + 1) * p.hello_interval
        self.schedule(nxt, _HELLO, u, j + 1)
        self.control += 1
        self.broadcast(u, self.ctrl_time, (HELLO, u))

    def on_rreq(self, sender, v, pkt):
        _, origin, rid, dest, ttl, hops = pkt
        key = (origin, rid)
        seen = self.seen[v]
        if key in seen:
            return
        seen.add(key)
        hops += 1
        now = self.now
        expiry = now + self.p.active_route_timeout
        r = self.routes[v].get(origin)
        if r is None or r[2] <= now or hops <= r[1]:
            self.routes[v][origin] = [sender, hops, max(expiry, r[2] if r else 0.0)]
        elif expiry > r[2]:
            r[2] = expiry
        if v == dest:
            self.control += 1
            self.unicast(v, sender, self.ctrl_time, (RREP, origin, dest, 0, self.p.my_route_timeout))
        elif ttl > 1:
            self.control += 1
            self.broadcast(v, self.ctrl_time, (RREQ, origin, rid, dest, ttl - 1, hops))

    def on_rrep(self, sender, v, pkt):
        _, origin, dest, hops, lifetime = pkt
        hops += 1
        now = self.now
        self.routes[v][dest] = [sender, hops, now + lifetime]
        if v == origin:
            self.pending[v].pop(dest, None)
            buf = self.buffers[v].pop(dest, [])
            limit = now - self.sc.buffer_timeout
            for data in buf:
                if data[3] >= limit:
                    self.route_output(v, data)
            return
        back = self.valid_route(v, origin)
        if back is None:
            return
        self.control += 1
        self.unicast(v, back[0], self.ctrl_time, (RREP, origin, dest, hops, lifetime))


def simulate_vanet(scenario: ScenarioConfig, genome) -> QosMetrics:
    """Run one simulation of ``scenario`` with AODV configured by ``genome``.

    Pure function: the result depends only on ``(scenario, genome)``.
    """
    return _Simulation(scenario, AodvParams.from_genome(genome)).run()
