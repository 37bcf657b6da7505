"""Watch the data cache react to access patterns.

Default geometry: 16 KiB, 32-byte lines, 2-way set associative, LRU,
write-back.  Sequential scans amortize one miss over eight 4-byte reads;
a stride equal to the way span defeats the cache entirely.
"""

from irtime import CacheConfig, CacheModel


def hit_rate(cache, addresses, kind="load"):
    hits = 0
    for a in addresses:
        hits += cache.access(a, kind).hit
    return hits / len(addresses)


def main():
    cfg = CacheConfig()
    print(f"{cfg.cache_size} B, {cfg.line_size} B lines, "
          f"{cfg.associativity}-way, {cfg.set_count} sets")
    print()

    # sequential scan: 1 miss per line, then 7 hits
    cache = CacheModel(cfg)
    seq = [4 * i for i in range(4096)]
    print(f"sequential scan        hit rate {hit_rate(cache, seq):6.1%}")

    # repeat the scan while it still fits: everything hits
    cache.reset()
    small = [4 * i for i in range(1024)]  # 4 KiB working set
    hit_rate(cache, small)
    print(f"re-scan of a warm 4KiB hit rate {hit_rate(cache, small):6.1%}")

    # three lines fighting over one 2-way set: LRU loses every time
    cache.reset()
    span = cfg.line_size * cfg.set_count
    thrash = [0, span, 2 * span] * 1000
    print(f"3-way conflict thrash  hit rate {hit_rate(cache, thrash):6.1%}")
    print()

    # dirty lines announce themselves on the way out
    cache.reset()
    cache.access(0, "store")
    cache.access(span, "load")
    out = cache.access(2 * span, "load")
    print(f"evicting a stored line: evicted_dirty={out.evicted_dirty}")


if __name__ == "__main__":
    main()
