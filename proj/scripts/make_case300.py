#!/usr/bin/env python3
"""Generate data/case300.m, a deterministic synthetic 300-bus test system.

Layout: 10 zones of 30 buses each. Every zone has a hub, an 8-bus
subtransmission ring around it, and seven 3-bus radial feeders hanging off
the ring. Hubs are tied in a backbone ring with chords; extra intra-zone
chords, inter-zone ties, and tapped transformers bring the branch count to
411. Zones 8 and 9 use a 9xxx id block so bus ids are non-contiguous.

Dimensions match the classic 300-bus case: 300 buses, 69 generators,
411 branches.
"""

import random

N_ZONES = 10
ZONE_SIZE = 30
BASE_MVA = 100.0


def bus_id(zone: int, local: int) -> int:
    if zone < 8:
        return zone * ZONE_SIZE + local + 1
    return 9001 + (zone - 8) * ZONE_SIZE + local


def hub(zone):
    return bus_id(zone, 0)


def ring(zone, i):
    return bus_id(zone, 1 + i)  # i in 0..7


def feeder(zone, chain, k):
    # chain in 0..6, k in 0..2
    return bus_id(zone, 9 + chain * 3 + k)


def main() -> None:
    rng = random.Random(300)
    branches = []  # (f, t, r, x, b, ratio, angle)

    def line(f, t, r, x, b=0.0, ratio=0.0, angle=0.0):
        branches.append((f, t, r, x, b, ratio, angle))

    # backbone: hub ring + chords (15)
    for z in range(N_ZONES):
        line(hub(z), hub((z + 1) % N_ZONES), 0.004, 0.035, 0.06)
    for z in range(0, N_ZONES, 2):
        line(hub(z), hub((z + 3) % N_ZONES), 0.006, 0.05, 0.08)

    # per-zone structure (33 each, 330 total)
    for z in range(N_ZONES):
        for i in (0, 2, 4, 6):  # 4 spokes hub->ring
            line(hub(z), ring(z, i), 0.008, 0.045, 0.03)
        for i in range(8):  # ring
            line(ring(z, i), ring(z, (i + 1) % 8), 0.015, 0.065, 0.02)
        for c in range(7):  # feeders: ring anchor -> f0 -> f1 -> f2
            anchor = ring(z, c)
            prev = anchor
            for k in range(3):
                r = 0.03 + 0.02 * rng.random()
                x = 0.08 + 0.05 * rng.random()
                line(prev, feeder(z, c, k), round(r, 4), round(x, 4), 0.004)
                prev = feeder(z, c, k)

    # intra-zone chords: ring(1)->f(0,1) mid, ring(5)->f(4,1) mid, ring(7)->f(6,0) (30)
    for z in range(N_ZONES):
        line(ring(z, 1), feeder(z, 0, 1), 0.04, 0.11, 0.004)
        line(ring(z, 5), feeder(z, 4, 1), 0.04, 0.12, 0.004)
        line(ring(z, 7), feeder(z, 6, 0), 0.035, 0.1, 0.004)

    # inter-zone ties between ring buses of adjacent zones (20)
    for z in range(N_ZONES):
        line(ring(z, 3), ring((z + 1) % N_ZONES, 7), 0.02, 0.09, 0.03)
        line(ring(z, 4), ring((z + 2) % N_ZONES, 0), 0.025, 0.1, 0.03)

    # tapped transformers: feeder tails to the next zone's ring (16)
    for k in range(16):
        z = k % N_ZONES
        tap = round(0.95 + 0.01 * (k % 8), 3)
        shift = 1.0 if k % 5 == 0 else 0.0
        line(feeder(z, 2, 2), ring((z + 1) % N_ZONES, 2), 0.0, 0.12, 0.0, tap, shift)

    assert len(branches) == 411, len(branches)

    # loads: all feeder buses plus half the ring buses
    pd = {}
    qd = {}
    for z in range(N_ZONES):
        for c in range(7):
            for k in range(3):
                b = feeder(z, c, k)
                p = round(2.0 + 6.0 * rng.random(), 2)
                pd[b] = p
                qd[b] = round(p * (0.25 + 0.2 * rng.random()), 2)
        for i in range(0, 8, 2):
            b = ring(z, i)
            p = round(8.0 + 10.0 * rng.random(), 2)
            pd[b] = p
            qd[b] = round(p * 0.3, 2)

    total_pd = sum(pd.values())

    # generators: hub units + ring units, 69 total, capacity ~1.55x load
    gens = []  # (bus, pg, qmax, qmin, vg, pmax)
    gen_buses = []
    for z in range(N_ZONES):
        gen_buses.append(hub(z))
    for z in range(N_ZONES):
        for i in (1, 3, 5):
            gen_buses.append(ring(z, i))
    for z in range(N_ZONES):
        for i in (6, 7):
            gen_buses.append(ring(z, i))
    gen_buses += [ring(0, 0), ring(2, 2), ring(4, 4), ring(6, 0),
                  ring(8, 2), ring(1, 4), ring(3, 0), ring(5, 2), ring(7, 4)]
    gen_buses = gen_buses[:69]
    assert len(set(gen_buses)) == 69

    cap_total = 1.55 * total_pd
    big = cap_total * 0.25  # slack zone share
    rest = (cap_total - big) / (len(gen_buses) - 1)
    for gb in gen_buses:
        if gb == hub(0):
            pmax = big
        else:
            pmax = rest * (0.7 + 0.6 * rng.random())
        pmax = round(pmax, 1)
        pg = round(0.55 * pmax, 1)
        qmax = round(0.55 * pmax, 1)
        qmin = round(-0.35 * pmax, 1)
        vg = round(1.0 + 0.02 * rng.random(), 3)
        gens.append((gb, pg, qmax, qmin, vg, pmax))

    shunt_bs = {}
    for z in range(0, N_ZONES, 2):
        shunt_bs[feeder(z, 3, 2)] = round(3.0 + 4.0 * rng.random(), 1)
        shunt_bs[feeder(z, 5, 1)] = round(2.0 + 3.0 * rng.random(), 1)

    gen_at = {g[0] for g in gens}
    all_buses = [bus_id(z, l) for z in range(N_ZONES) for l in range(ZONE_SIZE)]
    all_buses.sort()

    out = []
    out.append("function mpc = case300")
    out.append("%CASE300    Synthetic 300-bus meshed test system.")
    out.append("%   Generated by scripts/make_case300.py (deterministic, seed 300).")
    out.append("")
    out.append("%% MATPOWER Case Format : Version 2")
    out.append("mpc.version = '2';")
    out.append("")
    out.append("%% system MVA base")
    out.append("mpc.baseMVA = 100;")
    out.append("")
    out.append("%% bus data")
    out.append("%\tbus_i\ttype\tPd\tQd\tGs\tBs\tarea\tVm\tVa\tbaseKV\tzone\tVmax\tVmin")
    out.append("mpc.bus = [")
    for b in all_buses:
        btype = 3 if b == hub(0) else (2 if b in gen_at else 1)
        out.append(
            f"\t{b}\t{btype}\t{pd.get(b, 0)}\t{qd.get(b, 0)}\t0\t{shunt_bs.get(b, 0)}"
            f"\t1\t1\t0\t0\t1\t1.06\t0.94;"
        )
    out.append("];")
    out.append("")
    out.append("%% generator data")
    out.append("%\tbus\tPg\tQg\tQmax\tQmin\tVg\tmBase\tstatus\tPmax\tPmin\t"
               "Pc1\tPc2\tQc1min\tQc1max\tQc2min\tQc2max\tramp_agc\tramp_10\tramp_30\tramp_q\tapf")
    out.append("mpc.gen = [")
    for gb, pg, qmax, qmin, vg, pmax in gens:
        out.append(f"\t{gb}\t{pg}\t0\t{qmax}\t{qmin}\t{vg}\t100\t1\t{pmax}\t0"
                   f"\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0;")
    out.append("];")
    out.append("")
    out.append("%% branch data")
    out.append("%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus\tangmin\tangmax")
    out.append("mpc.branch = [")
    for f, t, r, x, b, ratio, angle in branches:
        out.append(f"\t{f}\t{t}\t{r}\t{x}\t{b}\t9900\t0\t0\t{ratio}\t{angle}\t1\t-360\t360;")
    out.append("];")
    out.append("")

    with open("data/case300.m", "w") as fh:
        fh.write("\n".join(out))
    print(f"case300: {len(all_buses)} buses, {len(gens)} gens, {len(branches)} branches, "
          f"total load {total_pd:.1f} MW, capacity {cap_total:.1f} MW")


if __name__ == "__main__":
    main()
