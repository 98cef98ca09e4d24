//! Immutable sparse digraph in compressed row storage (CRS) form.
//!
//! A [`Digraph`] holds two CRS structures: the directed out-arc adjacency and
//! the undirected open-neighbourhood adjacency. Both are built once, sorted,
//! and never mutated, so a graph can be shared freely between worker threads.

use thiserror::Error;

/// Internal vertex index. Vertices are numbered `0..n`; ingestion remaps
/// 1-based external ids before the graph is built.
pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("arc ({0}, {1}) has an endpoint outside a graph of order {2}")]
    ArcOutOfRange(VertexId, VertexId, usize),
    #[error("graph order {0} exceeds the {max} vertex-id limit", max = u32::MAX as u64 + 1)]
    OrderTooLarge(usize),
    #[error("scratch buffer exhausted after {written} entries while merging neighbourhoods of ({u}, {v})")]
    ScratchTooSmall { u: VertexId, v: VertexId, written: usize },
}

/// One sorted CRS adjacency: `row_offsets` has length `n + 1` and
/// `columns[row_offsets[u]..row_offsets[u + 1]]` is the strictly increasing
/// row of vertex `u`. No row contains its own index (no self-loops).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrsAdjacency {
    row_offsets: Vec<usize>,
    columns: Vec<VertexId>,
}

impl CrsAdjacency {
    /// Builds a sorted, deduplicated CRS from (row, column) pairs.
    /// Returns the structure and the number of duplicate entries removed.
    fn from_pairs(n: usize, pairs: impl Iterator<Item = (VertexId, VertexId)> + Clone) -> (Self, u64) {
        let mut row_offsets = vec![0usize; n + 1];
        for (u, _) in pairs.clone() {
            row_offsets[u as usize + 1] += 1;
        }
        for i in 1..=n {
            row_offsets[i] += row_offsets[i - 1];
        }
        let mut columns = vec![0 as VertexId; row_offsets[n]];
        let mut cursor = row_offsets.clone();
        for (u, v) in pairs {
            columns[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
        }

        // Sort each row, then compact duplicates in place so the final
        // arrays are identical for any input ordering of the same multiset.
        let mut duplicates = 0u64;
        let mut write = 0usize;
        let mut new_offsets = vec![0usize; n + 1];
        for u in 0..n {
            let (start, end) = (row_offsets[u], row_offsets[u + 1]);
            columns[start..end].sort_unstable();
            let mut prev: Option<VertexId> = None;
            for i in start..end {
                let v = columns[i];
                if prev == Some(v) {
                    duplicates += 1;
                } else {
                    columns[write] = v;
                    write += 1;
                    prev = Some(v);
                }
            }
            new_offsets[u + 1] = write;
        }
        columns.truncate(write);
        (
            CrsAdjacency {
                row_offsets: new_offsets,
                columns,
            },
            duplicates,
        )
    }

    pub fn order(&self) -> usize {
        self.row_offsets.len() - 1
    }

    pub fn entry_count(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, u: VertexId) -> &[VertexId] {
        &self.columns[self.row_offsets[u as usize]..self.row_offsets[u as usize + 1]]
    }

    /// Membership test by binary search over the sorted row.
    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.row(u).binary_search(&v).is_ok()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn columns(&self) -> &[VertexId] {
        &self.columns
    }
}

/// Counts of records dropped while sanitizing dirty input into a strict digraph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub loops_dropped: u64,
    pub duplicates_dropped: u64,
}

/// Summary degree figures: maximum undirected degree, mean undirected degree,
/// and the arc count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub max_degree: usize,
    pub mean_degree: f64,
    pub arc_count: usize,
}

/// An immutable strict digraph (no loops, no duplicate arcs).
///
/// `out_arcs` answers directed queries; `neighbours` answers undirected
/// queries, with `v ∈ N(u)` iff at least one of the arcs `u→v`, `v→u` exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out_arcs: CrsAdjacency,
    neighbours: CrsAdjacency,
}

impl Digraph {
    /// Builds the graph from raw arcs. Self-loops are dropped and duplicate
    /// arcs are collapsed; the counts of both are reported so callers can
    /// warn about dirty input. Arcs referencing a vertex `>= n` are an error.
    pub fn build(n: usize, arcs: &[(VertexId, VertexId)]) -> Result<(Digraph, BuildStats), GraphError> {
        if n > u32::MAX as usize + 1 {
            return Err(GraphError::OrderTooLarge(n));
        }
        let mut loops_dropped = 0u64;
        for &(u, v) in arcs {
            if (u as usize) >= n || (v as usize) >= n {
                return Err(GraphError::ArcOutOfRange(u, v, n));
            }
            if u == v {
                loops_dropped += 1;
            }
        }

        let proper = arcs.iter().copied().filter(|&(u, v)| u != v);
        let (out_arcs, duplicates_dropped) = CrsAdjacency::from_pairs(n, proper);

        // Undirected neighbourhoods: every remaining arc contributes both
        // directions; deduplication merges mutual pairs.
        let symmetric = (0..n as VertexId).flat_map(|u| {
            out_arcs
                .row(u)
                .iter()
                .flat_map(move |&v| [(u, v), (v, u)])
        });
        // `from_pairs` wants a cloneable iterator; the closure chain above is
        // cheap to clone since it only borrows the out-arc CRS.
        let (neighbours, _) = CrsAdjacency::from_pairs(n, symmetric);

        Ok((
            Digraph {
                n,
                out_arcs,
                neighbours,
            },
            BuildStats {
                loops_dropped,
                duplicates_dropped,
            },
        ))
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of arcs after sanitizing.
    pub fn arc_count(&self) -> usize {
        self.out_arcs.entry_count()
    }

    pub fn out_row(&self, u: VertexId) -> &[VertexId] {
        self.out_arcs.row(u)
    }

    /// Open neighbourhood N(u), sorted ascending.
    pub fn neighbour_row(&self, u: VertexId) -> &[VertexId] {
        self.neighbours.row(u)
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.neighbour_row(u).len()
    }

    /// True iff the arc `u→v` is present. Binary search over the sorted row.
    pub fn is_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out_arcs.contains(u, v)
    }

    /// True iff `u` and `v` are adjacent in the undirected sense.
    pub fn is_neighbour(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbours.contains(u, v)
    }

    /// Writes S = N(u) ∪ N(v) \ {u, v} into the front of `scratch`, sorted
    /// and deduplicated, and returns |S|. The merge is a two-pointer walk
    /// over the two sorted rows with `u` and `v` skipped inline, so exactly
    /// |S| entries are written.
    pub fn neighbour_set_union(
        &self,
        u: VertexId,
        v: VertexId,
        scratch: &mut [VertexId],
    ) -> Result<usize, GraphError> {
        let (a, b) = (self.neighbour_row(u), self.neighbour_row(v));
        let (mut i, mut j, mut out) = (0usize, 0usize, 0usize);
        macro_rules! emit {
            ($w:expr) => {{
                let w = $w;
                if w != u && w != v {
                    if out == scratch.len() {
                        return Err(GraphError::ScratchTooSmall { u, v, written: out });
                    }
                    scratch[out] = w;
                    out += 1;
                }
            }};
        }
        while i < a.len() && j < b.len() {
            let (x, y) = (a[i], b[j]);
            if x < y {
                emit!(x);
                i += 1;
            } else if y < x {
                emit!(y);
                j += 1;
            } else {
                emit!(x);
                i += 1;
                j += 1;
            }
        }
        for &x in &a[i..] {
            emit!(x);
        }
        for &y in &b[j..] {
            emit!(y);
        }
        Ok(out)
    }

    /// |S| for the dyad (u, v) without materializing the union.
    pub fn neighbour_union_len(&self, u: VertexId, v: VertexId) -> usize {
        let (a, b) = (self.neighbour_row(u), self.neighbour_row(v));
        let (mut i, mut j, mut out) = (0usize, 0usize, 0usize);
        while i < a.len() && j < b.len() {
            let (x, y) = (a[i], b[j]);
            let w = if x < y {
                i += 1;
                x
            } else if y < x {
                j += 1;
                y
            } else {
                i += 1;
                j += 1;
                x
            };
            out += (w != u && w != v) as usize;
        }
        for &x in &a[i..] {
            out += (x != u && x != v) as usize;
        }
        for &y in &b[j..] {
            out += (y != u && y != v) as usize;
        }
        out
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let total: usize = self.neighbours.entry_count();
        let max_degree = (0..self.n as VertexId)
            .map(|u| self.degree(u))
            .max()
            .unwrap_or(0);
        let mean_degree = if self.n == 0 {
            0.0
        } else {
            total as f64 / self.n as f64
        };
        DegreeStats {
            max_degree,
            mean_degree,
            arc_count: self.arc_count(),
        }
    }

    pub fn out_arcs(&self) -> &CrsAdjacency {
        &self.out_arcs
    }

    pub fn neighbours(&self) -> &CrsAdjacency {
        &self.neighbours
    }
}
