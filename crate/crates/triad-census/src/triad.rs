//! Triad coding, the 64→16 isomorphism classifier, and the census kernels.
//!
//! An ordered vertex triple (u, v, w) is encoded as a 6-bit code with one bit
//! per possible arc:
//!
//! ```text
//! 1 = u→v   2 = v→u   4 = u→w   8 = w→u   16 = v→w   32 = w→v
//! ```
//!
//! The 64 codes fall into 16 orbits under the six relabelings of the triple;
//! the classifier maps each code to its orbit's class index 1..=16, named by
//! the MAN convention (counts of Mutual/Asymmetric/Null dyads plus an
//! orientation suffix).

use crate::graph::{Digraph, GraphError, VertexId};
use thiserror::Error;

/// Class labels in class order 1..=16.
pub const CLASS_LABELS: [&str; 16] = [
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U", "030T", "030C", "201", "120D",
    "120U", "120C", "210", "300",
];

/// One canonical code per class, in class order. For MAN groups that contain
/// several classes the representative pins which orbit carries which
/// orientation suffix; e.g. 021D is {B→A, B→C} on the triple (A, B, C).
const CLASS_REPRESENTATIVES: [u8; 16] = [0, 1, 3, 18, 33, 17, 11, 7, 21, 25, 15, 43, 23, 39, 31, 63];

/// (tail position, head position, code bit) for the six possible arcs.
const ARC_BITS: [(usize, usize, u8); 6] = [
    (0, 1, 1),
    (1, 0, 2),
    (0, 2, 4),
    (2, 0, 8),
    (1, 2, 16),
    (2, 1, 32),
];

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// The code of the triple after relabeling position i to `perm[i]`.
fn permute_code(code: u8, perm: [usize; 3]) -> u8 {
    let mut adj = [[false; 3]; 3];
    for &(i, j, bit) in &ARC_BITS {
        if code & bit != 0 {
            adj[perm[i]][perm[j]] = true;
        }
    }
    ARC_BITS
        .iter()
        .filter(|&&(i, j, _)| adj[i][j])
        .map(|&(_, _, bit)| bit)
        .sum()
}

/// Whether the census buckets by the 16 isomorphism classes or by all 64
/// labelled triad codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CensusMode {
    Iso16,
    NonIso64,
}

impl CensusMode {
    pub fn bucket_count(self) -> usize {
        match self {
            CensusMode::Iso16 => 16,
            CensusMode::NonIso64 => 64,
        }
    }
}

/// Maps the 64 triad codes onto the 16 isomorphism classes.
///
/// The table is derived by orbit enumeration rather than hard-coded: two codes
/// share a class exactly when some relabeling of (u, v, w) carries one to the
/// other. The derivation is anchored to [`CLASS_REPRESENTATIVES`] and
/// self-checked, so a broken orbit computation cannot produce a plausible but
/// wrong classifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriadClassifier {
    table: [u8; 64],
    class_sizes: [u8; 16],
}

impl TriadClassifier {
    pub fn derive() -> TriadClassifier {
        // Orbit fingerprint: the minimum code reachable by relabeling.
        let mut orbit_min = [0u8; 64];
        for code in 0..64u8 {
            orbit_min[code as usize] = PERMUTATIONS
                .iter()
                .map(|&p| permute_code(code, p))
                .min()
                .expect("six permutations");
        }
        let mut class_of_orbit = [0u8; 64]; // indexed by orbit_min, 0 = unassigned
        for (idx, &rep) in CLASS_REPRESENTATIVES.iter().enumerate() {
            let slot = &mut class_of_orbit[orbit_min[rep as usize] as usize];
            assert_eq!(*slot, 0, "class representatives must sit in distinct orbits");
            *slot = idx as u8 + 1;
        }

        let mut table = [0u8; 64];
        let mut class_sizes = [0u8; 16];
        for code in 0..64usize {
            let class = class_of_orbit[orbit_min[code] as usize];
            assert!(class != 0, "code {code} fell outside the 16 anchored orbits");
            table[code] = class;
            class_sizes[class as usize - 1] += 1;
        }
        assert!(class_sizes.iter().all(|&s| s > 0), "all 16 classes populated");
        assert_eq!(class_sizes.iter().map(|&s| s as u32).sum::<u32>(), 64);
        TriadClassifier { table, class_sizes }
    }

    /// Class index 1..=16 of a triad code.
    pub fn class_of_code(&self, code: u8) -> u8 {
        self.table[code as usize]
    }

    pub fn table(&self) -> &[u8; 64] {
        &self.table
    }

    /// Number of codes per class, in class order.
    pub fn class_sizes(&self) -> &[u8; 16] {
        &self.class_sizes
    }

    /// MAN label of a 1-based class index.
    pub fn label(class: usize) -> &'static str {
        CLASS_LABELS[class - 1]
    }
}

/// The two directed probes of a dyad, taken once per canonical dyad and
/// reused for every triad it anchors, so the per-triad code needs only the
/// four probes that involve w.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadInfo {
    pub edge_uv: bool,
    pub edge_vu: bool,
}

impl DyadInfo {
    pub fn probe(g: &Digraph, u: VertexId, v: VertexId) -> DyadInfo {
        DyadInfo {
            edge_uv: g.is_edge(u, v),
            edge_vu: g.is_edge(v, u),
        }
    }

    /// Code contribution of the (u, v) dyad: 1, 2, or 3 for a connected dyad.
    pub fn pre_type(self) -> u8 {
        self.edge_uv as u8 + 2 * (self.edge_vu as u8)
    }

    pub fn is_mutual(self) -> bool {
        self.edge_uv && self.edge_vu
    }
}

/// Triad frequency counters: 16 buckets in isomorphic mode, 64 in
/// non-isomorphic mode. Bucket i holds class i+1 (or code i). A completed
/// census over a graph of order n sums to C(n, 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusArray {
    mode: CensusMode,
    counts: Vec<u64>,
}

impl CensusArray {
    pub fn zeroed(mode: CensusMode) -> CensusArray {
        CensusArray {
            mode,
            counts: vec![0; mode.bucket_count()],
        }
    }

    pub fn mode(&self) -> CensusMode {
        self.mode
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count for a 1-based class index (iso mode) or code+1 (non-iso mode).
    pub fn count(&self, class: usize) -> u64 {
        self.counts[class - 1]
    }

    pub fn total(&self) -> Result<u64, CensusError> {
        self.counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or(CensusError::CounterOverflow)
    }

    /// Collapses a 64-bucket census to the 16 isomorphism classes. The
    /// identity `fold(noniso census) == iso census` ties the two modes
    /// together. Iso-mode input is returned unchanged.
    pub fn fold_to_isomorphic(&self, classifier: &TriadClassifier) -> CensusArray {
        match self.mode {
            CensusMode::Iso16 => self.clone(),
            CensusMode::NonIso64 => {
                let mut folded = CensusArray::zeroed(CensusMode::Iso16);
                for (code, &count) in self.counts.iter().enumerate() {
                    folded.counts[classifier.class_of_code(code as u8) as usize - 1] += count;
                }
                folded
            }
        }
    }

    pub(crate) fn counts_mut(&mut self) -> &mut [u64] {
        &mut self.counts
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("triad total n(n-1)(n-2)/6 overflows 64 bits for n = {0}")]
    TripleCountOverflow(usize),
    #[error("census counter overflow")]
    CounterOverflow,
    #[error("non-null census sum {sum} exceeds the triad total {total}; census is inconsistent")]
    Inconsistent { sum: u64, total: u64 },
    #[error("census arrays have mismatched modes or lengths")]
    ModeMismatch,
    #[error("census worker thread panicked: {0}")]
    Worker(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// C(n, 3) in 64 bits. Among three consecutive integers exactly one is
/// divisible by 3 and, after that division, an even factor always remains, so
/// dividing before the full product avoids intermediate overflow.
pub fn triple_count(n: usize) -> Result<u64, CensusError> {
    if n < 3 {
        return Ok(0);
    }
    let mut f = [n as u64, n as u64 - 1, n as u64 - 2];
    let i3 = f.iter().position(|x| x % 3 == 0).expect("one multiple of 3");
    f[i3] /= 3;
    let i2 = f.iter().position(|x| x % 2 == 0).expect("an even factor remains");
    f[i2] /= 2;
    f.iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x))
        .ok_or(CensusError::TripleCountOverflow(n))
}

/// Null-triad closing: `C(n, 3) - non_null_sum`.
pub fn null_count(n: usize, non_null_sum: u64) -> Result<u64, CensusError> {
    let total = triple_count(n)?;
    if non_null_sum > total {
        return Err(CensusError::Inconsistent {
            sum: non_null_sum,
            total,
        });
    }
    Ok(total - non_null_sum)
}

/// Probe accounting for the census hot loop. The plain census uses the no-op
/// sink; the instrumented variant tallies how many directed edge probes the
/// inner triad loop actually performs.
pub(crate) trait ProbeSink {
    fn inner_probes(&mut self, count: u64);
    fn canonical_triad(&mut self);
    fn canonical_dyad(&mut self);
}

pub(crate) struct NoProbes;

impl ProbeSink for NoProbes {
    #[inline(always)]
    fn inner_probes(&mut self, _count: u64) {}
    #[inline(always)]
    fn canonical_triad(&mut self) {}
    #[inline(always)]
    fn canonical_dyad(&mut self) {}
}

/// Counters exposed by [`census_sequential_with_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CensusStats {
    pub canonical_dyads: u64,
    pub canonical_triads: u64,
    /// Directed edge probes issued inside the w-loop (four per triad; the two
    /// dyad probes are hoisted out and reused).
    pub inner_edge_probes: u64,
}

impl ProbeSink for CensusStats {
    #[inline(always)]
    fn inner_probes(&mut self, count: u64) {
        self.inner_edge_probes += count;
    }
    #[inline(always)]
    fn canonical_triad(&mut self) {
        self.canonical_triads += 1;
    }
    #[inline(always)]
    fn canonical_dyad(&mut self) {
        self.canonical_dyads += 1;
    }
}

/// Where census increments land. Sequential runs add into a plain array;
/// the shared-atomic executor adds into `AtomicU64` counters.
pub(crate) trait CountSink {
    fn add(&mut self, bucket: usize, amount: u64);
}

impl CountSink for CensusArray {
    #[inline(always)]
    fn add(&mut self, bucket: usize, amount: u64) {
        self.counts[bucket] += amount;
    }
}

#[inline(always)]
fn bucket_of_code(code: u8, classifier: &TriadClassifier, mode: CensusMode) -> usize {
    match mode {
        CensusMode::Iso16 => classifier.class_of_code(code) as usize - 1,
        CensusMode::NonIso64 => code as usize,
    }
}

/// Classifies the ordered triple (u, v, w) given the pre-probed dyad. Returns
/// the 1-based class index (1..=16 isomorphic, code+1 non-isomorphic). Only
/// the four probes involving w are issued; the (u, v) probes come from `pre`.
pub fn triad_code(
    g: &Digraph,
    u: VertexId,
    v: VertexId,
    w: VertexId,
    pre: DyadInfo,
    classifier: &TriadClassifier,
    mode: CensusMode,
) -> usize {
    debug_assert!(u != v && v != w && u != w);
    debug_assert_eq!(pre, DyadInfo::probe(g, u, v));
    let code = code_with_pre(g, u, v, w, pre.pre_type());
    bucket_of_code(code, classifier, mode) + 1
}

#[inline(always)]
fn code_with_pre(g: &Digraph, u: VertexId, v: VertexId, w: VertexId, pre_type: u8) -> u8 {
    let mut code = pre_type;
    code += 4 * g.is_edge(u, w) as u8;
    code += 8 * g.is_edge(w, u) as u8;
    code += 16 * g.is_edge(v, w) as u8;
    code += 32 * g.is_edge(w, v) as u8;
    code
}

/// Processes one canonical dyad (u, v): credits its dyadic triads in bulk and
/// classifies every canonical connected triad it anchors. Returns the number
/// of non-null triads added. Shared by the sequential census and every
/// parallel worker, so all execution paths count identically.
pub(crate) fn process_dyad<C: CountSink, P: ProbeSink>(
    g: &Digraph,
    u: VertexId,
    v: VertexId,
    classifier: &TriadClassifier,
    mode: CensusMode,
    scratch: &mut [VertexId],
    counts: &mut C,
    probes: &mut P,
) -> Result<u64, GraphError> {
    probes.canonical_dyad();
    let s_len = g.neighbour_set_union(u, v, scratch)?;

    let pre = DyadInfo::probe(g, u, v);
    let pre_type = pre.pre_type();
    debug_assert!((1..=3).contains(&pre_type), "dyad must be connected");

    // Every vertex outside S ∪ {u, v} closes a dyadic triad whose code is
    // exactly the dyad's pre-type.
    let dyadic = (g.order() - s_len - 2) as u64;
    counts.add(bucket_of_code(pre_type, classifier, mode), dyadic);
    let mut non_null = dyadic;

    for &w in &scratch[..s_len] {
        // Canonical selection: (u, v, w) is counted here unless the triad was
        // already reached from the earlier dyad (u, w).
        if v < w || (w < v && u < w && !g.is_neighbour(u, w)) {
            let code = code_with_pre(g, u, v, w, pre_type);
            probes.inner_probes(4);
            probes.canonical_triad();
            counts.add(bucket_of_code(code, classifier, mode), 1);
            non_null += 1;
        }
    }
    Ok(non_null)
}

fn census_sequential_impl<P: ProbeSink>(
    g: &Digraph,
    classifier: &TriadClassifier,
    mode: CensusMode,
    probes: &mut P,
) -> Result<CensusArray, CensusError> {
    let total = triple_count(g.order())?;
    let mut counts = CensusArray::zeroed(mode);
    let mut scratch = vec![0 as VertexId; 2 * g.degree_stats().max_degree];

    for u in 0..g.order() as VertexId {
        for &v in g.neighbour_row(u) {
            if u < v {
                process_dyad(g, u, v, classifier, mode, &mut scratch, &mut counts, probes)?;
            }
        }
    }

    let non_null: u64 = counts.counts[1..].iter().sum();
    if non_null > total {
        return Err(CensusError::Inconsistent {
            sum: non_null,
            total,
        });
    }
    counts.counts[0] = total - non_null;
    Ok(counts)
}

/// The subquadratic census: O(mΔ) over connected canonical dyads, with the
/// null-triad count recovered by subtraction at the end.
pub fn census_sequential(
    g: &Digraph,
    classifier: &TriadClassifier,
    mode: CensusMode,
) -> Result<CensusArray, CensusError> {
    census_sequential_impl(g, classifier, mode, &mut NoProbes)
}

/// Same census, also reporting dyad/triad/probe counters.
pub fn census_sequential_with_stats(
    g: &Digraph,
    classifier: &TriadClassifier,
    mode: CensusMode,
) -> Result<(CensusArray, CensusStats), CensusError> {
    let mut stats = CensusStats::default();
    let counts = census_sequential_impl(g, classifier, mode, &mut stats)?;
    Ok((counts, stats))
}

/// O(n³) reference census: enumerates every unordered triple and classifies
/// it with the plain six-probe code. Kept deliberately independent of the
/// subquadratic path so the two can check each other. Only sensible for
/// small graphs (n up to a few hundred).
pub fn census_bruteforce(g: &Digraph, classifier: &TriadClassifier, mode: CensusMode) -> CensusArray {
    let n = g.order() as VertexId;
    let mut counts = CensusArray::zeroed(mode);
    for u in 0..n {
        for v in (u + 1)..n {
            for w in (v + 1)..n {
                let code = g.is_edge(u, v) as u8
                    + 2 * g.is_edge(v, u) as u8
                    + 4 * g.is_edge(u, w) as u8
                    + 8 * g.is_edge(w, u) as u8
                    + 16 * g.is_edge(v, w) as u8
                    + 32 * g.is_edge(w, v) as u8;
                counts.counts[bucket_of_code(code, classifier, mode)] += 1;
            }
        }
    }
    counts
}
