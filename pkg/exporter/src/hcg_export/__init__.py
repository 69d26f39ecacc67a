"""Exporter producing hcg-1 character-group dumps.

The heavy number theory (ray class groups, character bases, infinity types)
is delegated to an external computer-algebra system; this package drives it,
normalizes its output deterministically, validates the result against the
hcg-1 invariants, and writes the dump.  A recorded-transcript backend replays
stored CAS sessions so the pipeline runs hermetically.
"""

__version__ = "0.1.0"
