#pragma once

// Fault-injection hooks for validator tests. Each one silently breaks a
// single invariant so the corresponding validator has something to report.

namespace dynseq {

class Cspsi;
class SmallString;

struct CspsiAccess {
    /// Adds one to the root's first R_1 entry without touching the leaves.
    static void corrupt_root_sum(Cspsi& c);
};

struct SmallStringAccess {
    /// Adds one to the root's first I entry.
    static void corrupt_char_count(SmallString& s);
    /// Clears the full flag of every leaf.
    static void clear_full_flags(SmallString& s);
    /// Adds one to E's first count for code 0.
    static void corrupt_counts(SmallString& s);
};

}  // namespace dynseq
