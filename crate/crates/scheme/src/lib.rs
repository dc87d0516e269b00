//! The coloring scheme ("Färbungsschema", FS): a branching table over the
//! boundary of a fast-maximal planar graph that certifies a guaranteed
//! family of boundary-distinct proper 4-colorings.
//!
//! One column per boundary vertex, in boundary order.  Every entry holds one
//! or two colors and points at a parent entry in the previous column, so the
//! table is a forest of chains; a root-to-leaf path spells out one boundary
//! word (two-color cells expand to both words but count once).  The shape
//! rules:
//!
//! * FS1 — base columns (E1, E2) have length 1; either γ=3 and the third
//!   column has length 1, or the last two columns are equal-length *coupled*
//!   columns of length 2^(γ−3).
//! * FS2 — every four-column window at the coupled end decomposes into known
//!   block types (checked by the `blocks` crate, which builds on this one).
//! * FS3 — every entry roots a well-formed sub-scheme reaching the final
//!   column.

use planar_core::VertexId;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub type Color = u8;

/// A set of colors from {1,2,3,4}, kept as a tiny bitmask.  Serialized as a
/// sorted list of digits.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorSet(u8);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn single(c: Color) -> Self {
        debug_assert!((1..=4).contains(&c));
        ColorSet(1 << c)
    }

    pub fn of(colors: &[Color]) -> Self {
        colors.iter().fold(Self::EMPTY, |s, &c| s.with(c))
    }

    /// All four colors.
    pub fn all() -> Self {
        Self::of(&[1, 2, 3, 4])
    }

    #[must_use]
    pub fn with(self, c: Color) -> Self {
        debug_assert!((1..=4).contains(&c));
        ColorSet(self.0 | 1 << c)
    }

    #[must_use]
    pub fn without(self, c: Color) -> Self {
        ColorSet(self.0 & !(1 << c))
    }

    #[must_use]
    pub fn minus(self, other: ColorSet) -> Self {
        ColorSet(self.0 & !other.0)
    }

    #[must_use]
    pub fn union(self, other: ColorSet) -> Self {
        ColorSet(self.0 | other.0)
    }

    pub fn intersects(self, other: ColorSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 & (1 << c) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Colors in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        (1..=4).filter(move |&c| self.contains(c))
    }

    pub fn min_color(self) -> Option<Color> {
        self.iter().next()
    }

    /// Apply a color permutation (perm[c] = image of c).
    #[must_use]
    pub fn permuted(self, perm: &[Color; 5]) -> Self {
        self.iter().fold(Self::EMPTY, |s, c| s.with(perm[c as usize]))
    }
}

impl std::fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits: Vec<String> = self.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", digits.join(","))
    }
}

impl Serialize for ColorSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.iter().collect::<Vec<Color>>().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let colors = Vec::<Color>::deserialize(de)?;
        for &c in &colors {
            if !(1..=4).contains(&c) {
                return Err(serde::de::Error::custom(format!("color {c} out of range")));
            }
        }
        Ok(ColorSet::of(&colors))
    }
}

/// One cell of the table: its color(s) and the index of its parent entry in
/// the previous column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub colors: ColorSet,
    pub parent: Option<usize>,
}

impl Entry {
    pub fn new(colors: ColorSet, parent: Option<usize>) -> Self {
        Entry { colors, parent }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub vertex: VertexId,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scheme {
    /// Boundary length of the graph the scheme belongs to; equals the number
    /// of columns for a full scheme.
    pub graph_gamma: usize,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("scheme must have at least 3 columns, got {0}")]
    TooFewColumns(usize),
    #[error("graph_gamma {gamma} does not match {cols} columns")]
    GammaMismatch { gamma: usize, cols: usize },
    #[error("column {col} entry {idx}: bad parent reference")]
    BadParent { col: usize, idx: usize },
    #[error("column {col} entry {idx} has no child (dangling chain)")]
    Dangling { col: usize, idx: usize },
    #[error("column {col} entry {idx} has an empty color set")]
    EmptyEntry { col: usize, idx: usize },
    #[error("FS1 violated at column {col}: {what}")]
    Fs1 { col: usize, what: String },
    #[error("column {col} entry {idx}: two-color cell outside the final column")]
    DoubleOutsideEnd { col: usize, idx: usize },
    #[error("column {col} entry {idx}: colors collide with parent (adjacent vertices)")]
    AdjacentClash { col: usize, idx: usize },
    #[error("word {0} is not proper along the boundary cycle")]
    ImproperWord(String),
    #[error("duplicate word {0} in enumeration")]
    DuplicateWord(String),
    #[error("wheel scheme needs n >= 4, got {0}")]
    WheelTooSmall(usize),
    #[error("no entry at column {col}, index {idx}")]
    ForeignEntry { col: usize, idx: usize },
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, SchemeError>;

/// How strictly to check the column-shape rules.  `Standard` is the wheel /
/// edge shape (single colors except the final column, lengths doubling up to
/// the coupled pair).  `Relaxed` admits the arc- and star-attachment shapes:
/// two-color cells mid-scheme and non-doubling lengths, with the count law
/// weakened to ≥ 2^(γ−3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    Standard,
    Relaxed,
}

impl Scheme {
    pub fn gamma(&self) -> usize {
        self.graph_gamma
    }

    /// Number of guaranteed boundary colorings: one per root-to-leaf path,
    /// two-color cells counted once.
    pub fn count_guaranteed(&self) -> u128 {
        self.columns.last().map_or(0, |c| c.entries.len() as u128)
    }

    /// The theorem's lower bound for this γ.
    pub fn bound(&self) -> u128 {
        1u128 << self.graph_gamma.saturating_sub(3)
    }

    /// children[col][idx] = indices of entries in column col+1 whose parent
    /// is idx.
    fn children(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::with_capacity(self.columns.len());
        for col in 0..self.columns.len() {
            let here = self.columns[col].entries.len();
            let mut kids = vec![Vec::new(); here];
            if let Some(next) = self.columns.get(col + 1) {
                for (j, e) in next.entries.iter().enumerate() {
                    if let Some(p) = e.parent {
                        if p < here {
                            kids[p].push(j);
                        }
                    }
                }
            }
            out.push(kids);
        }
        out
    }

    /// Root-to-leaf paths as entry indices, one per final-column entry.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let ncols = self.columns.len();
        let mut rows = Vec::new();
        if ncols == 0 {
            return rows;
        }
        for (leaf, _) in self.columns[ncols - 1].entries.iter().enumerate() {
            let mut path = vec![0usize; ncols];
            path[ncols - 1] = leaf;
            let mut idx = leaf;
            for col in (0..ncols - 1).rev() {
                idx = match self.columns[col + 1].entries[idx].parent {
                    Some(p) => p,
                    None => 0, // caught by validation; keep rows total
                };
                path[col] = idx;
            }
            rows.push(path);
        }
        rows
    }

    /// All boundary words described by the scheme: follow every row and
    /// expand each two-color cell into both choices.
    pub fn enumerate_all(&self) -> BTreeSet<String> {
        let mut words = BTreeSet::new();
        for row in self.rows() {
            let mut partial: Vec<String> = vec![String::new()];
            for (col, &idx) in row.iter().enumerate() {
                let colors: Vec<Color> = self.columns[col].entries[idx].colors.iter().collect();
                let mut next = Vec::with_capacity(partial.len() * colors.len());
                for w in &partial {
                    for &c in &colors {
                        let mut w2 = w.clone();
                        w2.push(char::from(b'0' + c));
                        next.push(w2);
                    }
                }
                partial = next;
            }
            words.extend(partial);
        }
        words
    }

    /// All boundary words of one row: expand each free-choice cell along it.
    fn row_words(&self, row: &[usize]) -> Vec<String> {
        let mut partial: Vec<String> = vec![String::new()];
        for (col, &idx) in row.iter().enumerate() {
            let colors: Vec<Color> = self.columns[col].entries[idx].colors.iter().collect();
            let mut next = Vec::with_capacity(partial.len() * colors.len());
            for w in &partial {
                for &c in &colors {
                    let mut w2 = w.clone();
                    w2.push(char::from(b'0' + c));
                    next.push(w2);
                }
            }
            partial = next;
        }
        partial
    }

    /// Structural validation (FS1 and FS3 plus local adjacency sanity).
    /// FS2, the block decomposition of the coupled end, lives in the
    /// `blocks` crate which builds on this one.
    pub fn validate_structure(&self, strictness: Strictness) -> Result<()> {
        let ncols = self.columns.len();
        if ncols < 3 {
            return Err(SchemeError::TooFewColumns(ncols));
        }
        if self.graph_gamma != ncols {
            return Err(SchemeError::GammaMismatch { gamma: self.graph_gamma, cols: ncols });
        }
        // Chain integrity: parents exist exactly where they should.
        for (col, column) in self.columns.iter().enumerate() {
            for (idx, e) in column.entries.iter().enumerate() {
                if e.colors.is_empty() {
                    return Err(SchemeError::EmptyEntry { col, idx });
                }
                match (col, e.parent) {
                    (0, None) => {}
                    (0, Some(_)) => return Err(SchemeError::BadParent { col, idx }),
                    (_, None) => return Err(SchemeError::BadParent { col, idx }),
                    (_, Some(p)) => {
                        if p >= self.columns[col - 1].entries.len() {
                            return Err(SchemeError::BadParent { col, idx });
                        }
                    }
                }
            }
        }
        // FS3: no dangling entries — every non-final entry has a child.
        let children = self.children();
        for col in 0..ncols - 1 {
            for (idx, kids) in children[col].iter().enumerate() {
                if kids.is_empty() {
                    return Err(SchemeError::Dangling { col, idx });
                }
            }
        }
        // Base side.
        if self.columns[0].entries.len() != 1 || self.columns[1].entries.len() != 1 {
            return Err(SchemeError::Fs1 { col: 0, what: "base columns must have length 1".into() });
        }
        if self.columns[0].entries[0].colors != ColorSet::single(1)
            || self.columns[1].entries[0].colors != ColorSet::single(2)
        {
            return Err(SchemeError::Fs1 { col: 0, what: "base side must be colored 1, 2".into() });
        }
        // Coupled end.
        if ncols == 3 {
            if self.columns[2].entries.len() != 1 {
                return Err(SchemeError::Fs1 { col: 2, what: "γ=3 third column must have length 1".into() });
            }
        } else {
            let a = self.columns[ncols - 2].entries.len();
            let b = self.columns[ncols - 1].entries.len();
            if a != b {
                return Err(SchemeError::Fs1 {
                    col: ncols - 2,
                    what: format!("coupled columns differ in length: {a} vs {b}"),
                });
            }
            // Coupling is a bijection: every next-to-last entry has exactly
            // one final-column child.
            for (idx, kids) in children[ncols - 2].iter().enumerate() {
                if kids.len() != 1 {
                    return Err(SchemeError::Fs1 {
                        col: ncols - 2,
                        what: format!("entry {idx} pairs with {} final cells", kids.len()),
                    });
                }
            }
            match strictness {
                Strictness::Standard => {
                    if b as u128 != self.bound() {
                        return Err(SchemeError::Fs1 {
                            col: ncols - 1,
                            what: format!("coupled length {b} ≠ 2^(γ−3) = {}", self.bound()),
                        });
                    }
                    // Lengths double from the base to the coupled pair.
                    for col in 2..ncols - 1 {
                        let prev = self.columns[col - 1].entries.len();
                        let here = self.columns[col].entries.len();
                        if here != 2 * prev && !(col == 2 && here == 2) {
                            return Err(SchemeError::Fs1 {
                                col,
                                what: format!("length {here} does not double {prev}"),
                            });
                        }
                    }
                }
                Strictness::Relaxed => {
                    if (b as u128) < self.bound() {
                        return Err(SchemeError::Fs1 {
                            col: ncols - 1,
                            what: format!("coupled length {b} < 2^(γ−3) = {}", self.bound()),
                        });
                    }
                }
            }
        }
        // Two-color cells: only in the final column under Standard.
        if strictness == Strictness::Standard {
            for (col, column) in self.columns.iter().enumerate().take(ncols - 1) {
                for (idx, e) in column.entries.iter().enumerate() {
                    if e.colors.len() > 1 {
                        return Err(SchemeError::DoubleOutsideEnd { col, idx });
                    }
                }
            }
        }
        // Adjacent columns are adjacent boundary vertices: color sets of
        // child and parent must be disjoint.
        for (col, column) in self.columns.iter().enumerate().skip(1) {
            for (idx, e) in column.entries.iter().enumerate() {
                let p = e.parent.unwrap();
                if e.colors.intersects(self.columns[col - 1].entries[p].colors) {
                    return Err(SchemeError::AdjacentClash { col, idx });
                }
            }
        }
        // Every word must be proper along the boundary cycle (including the
        // wrap-around edge to E1).
        let words = self.enumerate_all();
        for w in &words {
            let bytes: Vec<u8> = w.bytes().map(|b| b - b'0').collect();
            let improper = bytes.windows(2).any(|p| p[0] == p[1]) || bytes[bytes.len() - 1] == bytes[0];
            if improper {
                return Err(SchemeError::ImproperWord(w.clone()));
            }
        }
        // Rows must be pairwise boundary-distinct.  With single-color cells
        // everywhere but the end this means all expansions are distinct; once
        // free-choice cells appear mid-scheme, two rows may share some
        // expansions and the count survives as long as every row can claim a
        // representative word of its own.
        match strictness {
            Strictness::Standard => {
                let mut expected = 0usize;
                for row in self.rows() {
                    let mut product = 1usize;
                    for (col, &idx) in row.iter().enumerate() {
                        product *= self.columns[col].entries[idx].colors.len();
                    }
                    expected += product;
                }
                if words.len() != expected {
                    return Err(SchemeError::DuplicateWord(format!(
                        "{} distinct words from {expected} expansions",
                        words.len()
                    )));
                }
            }
            Strictness::Relaxed => {
                let word_ids: BTreeMap<&String, usize> =
                    words.iter().enumerate().map(|(i, w)| (w, i)).collect();
                let rows = self.rows();
                let adj: Vec<Vec<usize>> = rows
                    .iter()
                    .map(|row| self.row_words(row).iter().map(|w| word_ids[w]).collect())
                    .collect();
                let mut owner: Vec<Option<usize>> = vec![None; words.len()];
                let mut matched = 0usize;
                for r in 0..adj.len() {
                    let mut seen = vec![false; words.len()];
                    if Self::try_assign(r, &adj, &mut seen, &mut owner) {
                        matched += 1;
                    }
                }
                if matched < rows.len() {
                    return Err(SchemeError::DuplicateWord(format!(
                        "only {matched} distinct representative words for {} rows",
                        rows.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Augmenting-path step of the row → word matching: row r claims a word,
    /// displacing a previous owner if that owner can move on.
    fn try_assign(r: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &w in &adj[r] {
            if !std::mem::replace(&mut seen[w], true) {
                if owner[w].is_none() || Self::try_assign(owner[w].unwrap(), adj, seen, owner) {
                    owner[w] = Some(r);
                    return true;
                }
            }
        }
        false
    }

    /// The sub-scheme (Teil-FS) rooted at entry (col, idx): that entry and
    /// all its descendants down to the final column, re-indexed.
    pub fn subscheme(&self, col: usize, idx: usize) -> Result<Scheme> {
        if col >= self.columns.len() || idx >= self.columns[col].entries.len() {
            return Err(SchemeError::ForeignEntry { col, idx });
        }
        let mut columns = Vec::new();
        let root = &self.columns[col].entries[idx];
        columns.push(Column {
            vertex: self.columns[col].vertex,
            entries: vec![Entry::new(root.colors, None)],
        });
        // alive: indices (in self) of the current column's kept entries, in
        // the order they were emitted.
        let mut alive = vec![idx];
        for c in col + 1..self.columns.len() {
            let mut entries = Vec::new();
            let mut next_alive = Vec::new();
            for (j, e) in self.columns[c].entries.iter().enumerate() {
                if let Some(p) = e.parent {
                    if let Some(new_parent) = alive.iter().position(|&a| a == p) {
                        entries.push(Entry::new(e.colors, Some(new_parent)));
                        next_alive.push(j);
                    }
                }
            }
            columns.push(Column { vertex: self.columns[c].vertex, entries });
            alive = next_alive;
        }
        Ok(Scheme { graph_gamma: columns.len(), columns })
    }

    /// Apply a color permutation to every entry.
    #[must_use]
    pub fn permuted(&self, perm: &[Color; 5]) -> Scheme {
        Scheme {
            graph_gamma: self.graph_gamma,
            columns: self
                .columns
                .iter()
                .map(|c| Column {
                    vertex: c.vertex,
                    entries: c
                        .entries
                        .iter()
                        .map(|e| Entry::new(e.colors.permuted(perm), e.parent))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Reorder sibling entries (same parent) by ascending color set, in
    /// every column, adjusting parent references.  Two schemes describe the
    /// same table iff their canonical forms are equal.
    #[must_use]
    pub fn canonicalized(&self) -> Scheme {
        let mut out = self.clone();
        // old2new[i] = position of old entry i in the previous column after
        // its reorder; identity for the first column.
        let mut old2new: Vec<usize> = (0..out.columns[0].entries.len()).collect();
        for col in 0..out.columns.len() {
            let entries = std::mem::take(&mut out.columns[col].entries);
            // Re-point parents into the previous column's new order first.
            let mut indexed: Vec<(usize, Entry)> = entries
                .into_iter()
                .map(|mut e| {
                    if let Some(p) = e.parent {
                        e.parent = Some(old2new[p]);
                    }
                    e
                })
                .enumerate()
                .collect();
            // Stable sort by (parent, colors): groups siblings under their
            // parent and orders them by smallest color.
            indexed.sort_by_key(|(_, e)| (e.parent, e.colors));
            let mut mapping = vec![0usize; indexed.len()];
            for (new_pos, (old_pos, _)) in indexed.iter().enumerate() {
                mapping[*old_pos] = new_pos;
            }
            out.columns[col].entries = indexed.into_iter().map(|(_, e)| e).collect();
            old2new = mapping;
        }
        out
    }

    /// JSON round-trip helpers.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme serializes")
    }

    pub fn from_json(text: &str) -> Result<Scheme> {
        serde_json::from_str(text).map_err(|e| SchemeError::Json(e.to_string()))
    }

    /// Staircase pretty-printer: one text column per scheme column, entries
    /// vertically centered over the rows they govern.
    pub fn pretty(&self) -> String {
        let rows = self.rows();
        let nrows = rows.len();
        let ncols = self.columns.len();
        if nrows == 0 {
            return String::new();
        }
        // Span of entry (col, idx) = the rows whose path passes through it.
        let cell_text = |col: usize, idx: usize| -> String {
            let digits: Vec<String> =
                self.columns[col].entries[idx].colors.iter().map(|c| c.to_string()).collect();
            digits.join(",")
        };
        let mut widths = vec![0usize; ncols];
        let headers: Vec<String> = self.columns.iter().map(|c| format!("v{}", c.vertex)).collect();
        for col in 0..ncols {
            widths[col] = headers[col].len();
            for idx in 0..self.columns[col].entries.len() {
                widths[col] = widths[col].max(cell_text(col, idx).len());
            }
        }
        let mut grid = vec![vec![String::new(); ncols]; nrows];
        for col in 0..ncols {
            for idx in 0..self.columns[col].entries.len() {
                let governed: Vec<usize> = rows
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r[col] == idx)
                    .map(|(i, _)| i)
                    .collect();
                if let (Some(&first), Some(&last)) = (governed.first(), governed.last()) {
                    grid[(first + last) / 2][col] = cell_text(col, idx);
                }
            }
        }
        let mut s = String::new();
        let header_line: Vec<String> =
            headers.iter().zip(&widths).map(|(h, w)| format!("{h:<w$}")).collect();
        let _ = writeln!(s, "{}", header_line.join(" ").trim_end());
        for row in &grid {
            let line: Vec<String> =
                row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(s, "{}", line.join(" ").trim_end());
        }
        s
    }
}

/// Equality up to the allowed normalization: colors 1 and 2 are pinned by
/// the base side, colors 3 and 4 may be exchanged, and sibling order is
/// canonical.
pub fn canonical_equal(a: &Scheme, b: &Scheme) -> bool {
    if a.graph_gamma != b.graph_gamma {
        return false;
    }
    let bc = b.canonicalized();
    let swap34: [Color; 5] = [0, 1, 2, 4, 3];
    a.canonicalized() == bc || a.permuted(&swap34).canonicalized() == bc
}

/// Full color-permutation equivalence report: the permutation (if any) that
/// maps `a` onto `b` after canonical sibling order.  Used for comparisons
/// where a table is quoted "up to (Perm)".
pub fn equivalent_under(a: &Scheme, b: &Scheme) -> Option<[Color; 5]> {
    if a.graph_gamma != b.graph_gamma {
        return None;
    }
    let bc = b.canonicalized();
    let mut colors = [1u8, 2, 3, 4];
    permutations(&mut colors, 0, &mut |p| {
        let perm = [0, p[0], p[1], p[2], p[3]];
        (a.permuted(&perm).canonicalized() == bc).then_some(perm)
    })
}

fn permutations<T>(
    colors: &mut [Color; 4],
    k: usize,
    f: &mut impl FnMut(&[Color; 4]) -> Option<T>,
) -> Option<T> {
    if k == 4 {
        return f(colors);
    }
    for i in k..4 {
        colors.swap(k, i);
        if let Some(t) = permutations(colors, k + 1, f) {
            return Some(t);
        }
        colors.swap(k, i);
    }
    None
}

/// The γ=3 seed scheme over a boundary triangle: colors (1, 2, x) where x is
/// whatever the construction assigned to the third vertex.
pub fn triangle_scheme(vertices: [VertexId; 3], third_color: Color) -> Scheme {
    Scheme {
        graph_gamma: 3,
        columns: vec![
            Column { vertex: vertices[0], entries: vec![Entry::new(ColorSet::single(1), None)] },
            Column { vertex: vertices[1], entries: vec![Entry::new(ColorSet::single(2), Some(0))] },
            Column { vertex: vertices[2], entries: vec![Entry::new(ColorSet::single(third_color), Some(0))] },
        ],
    }
}

/// The wheel scheme FS(R_n) for n ≥ 4 rim vertices, built directly over the
/// boundary walk of `planar_core::build_wheel(n)`: rim colors come from
/// {1, 2, 4} (the hub takes 3), the tree part branches into both colors
/// other than the parent's, and the coupled end pairs each next-to-last cell
/// with the colors not blocked by its partner and E1.
pub fn scheme_for_wheel(n: usize) -> Result<Scheme> {
    if n < 4 {
        return Err(SchemeError::WheelTooSmall(n));
    }
    let gamma = n;
    // Boundary walk of build_wheel(n): 0, 1, 3, 4, ..., n.
    let walk: Vec<VertexId> = [0, 1].into_iter().chain(3..=n).collect();
    let rim = ColorSet::of(&[1, 2, 4]);
    let mut columns = vec![
        Column { vertex: walk[0], entries: vec![Entry::new(ColorSet::single(1), None)] },
        Column { vertex: walk[1], entries: vec![Entry::new(ColorSet::single(2), Some(0))] },
    ];
    // Tree part: columns 2..=γ−2 branch into the two rim colors different
    // from the parent (equivalently {parent, sibling} of the previous fork).
    // Siblings are listed with the grandparent's color first: that color is
    // always available again, and putting it first keeps each four-row end
    // window in the layout the coupled-end block tables use.
    for col in 2..=gamma - 2 {
        let prev = columns[col - 1].entries.clone();
        let grand = columns[col - 2].entries.clone();
        let mut entries = Vec::new();
        for (p, e) in prev.iter().enumerate() {
            let x = e.colors.min_color().unwrap();
            let g = match e.parent {
                Some(gp) => grand[gp].colors.min_color().unwrap(),
                None => 1,
            };
            let third = rim.without(x).without(g).min_color().unwrap();
            for c in [g, third] {
                entries.push(Entry::new(ColorSet::single(c), Some(p)));
            }
        }
        columns.push(Column { vertex: walk[col], entries });
    }
    // Final column: the partner of a next-to-last cell colored y may take
    // any rim color other than y and other than 1 (the last rim vertex is
    // adjacent to E1); y = 1 yields the two-color bonus cell.
    let last = columns[gamma - 2].entries.clone();
    let entries: Vec<Entry> = last
        .iter()
        .enumerate()
        .map(|(p, e)| {
            let y = e.colors.min_color().unwrap();
            Entry::new(rim.without(y).without(1), Some(p))
        })
        .collect();
    columns.push(Column { vertex: walk[gamma - 1], entries });
    Ok(Scheme { graph_gamma: gamma, columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &Scheme) -> Vec<String> {
        s.enumerate_all().into_iter().collect()
    }

    #[test]
    fn wheel5_scheme_words_and_count() {
        let s = scheme_for_wheel(5).unwrap();
        assert_eq!(words(&s), vec!["12124", "12142", "12412", "12414", "12424"]);
        assert_eq!(s.count_guaranteed(), 4);
        s.validate_structure(Strictness::Standard).unwrap();
    }

    #[test]
    fn wheel4_scheme() {
        let s = scheme_for_wheel(4).unwrap();
        assert_eq!(words(&s), vec!["1212", "1214", "1242"]);
        assert_eq!(s.count_guaranteed(), 2);
        s.validate_structure(Strictness::Standard).unwrap();
    }

    #[test]
    fn wheel_column_lengths_double_up_to_coupled_pair() {
        for n in 4..=9 {
            let s = scheme_for_wheel(n).unwrap();
            let lengths: Vec<usize> = s.columns.iter().map(|c| c.entries.len()).collect();
            let mut expected = vec![1, 1];
            for col in 2..n - 1 {
                expected.push(1 << (col - 1));
            }
            expected.push(1 << (n - 3));
            assert_eq!(lengths, expected, "n={n}");
            assert_eq!(s.count_guaranteed(), 1u128 << (n - 3));
            s.validate_structure(Strictness::Standard).unwrap();
        }
    }

    #[test]
    fn wheel5_layout_is_the_reference_table() {
        // Cell-for-cell layout, not just the word set: siblings carry the
        // grandparent color first and the coupled end closes with the
        // {2,4}-cell under the 1-entry.
        let s = scheme_for_wheel(5).unwrap();
        let col = |i: usize| -> Vec<Vec<u8>> {
            s.columns[i].entries.iter().map(|e| e.colors.iter().collect()).collect()
        };
        assert_eq!(col(2), vec![vec![1], vec![4]]);
        assert_eq!(col(3), vec![vec![2], vec![4], vec![2], vec![1]]);
        assert_eq!(col(4), vec![vec![4], vec![2], vec![4], vec![2, 4]]);
    }

    #[test]
    fn wheel6_contains_the_bonus_cell() {
        let s = scheme_for_wheel(6).unwrap();
        // Rows through E6=1 get both closing colors {2,4}.
        let all = s.enumerate_all();
        assert!(all.contains("121214") && all.contains("121212"));
        assert_eq!(s.count_guaranteed(), 8);
        assert!(all.len() > 8, "two-color cells add bonus words");
    }

    #[test]
    fn wheel_scheme_needs_n_at_least_4() {
        assert!(matches!(scheme_for_wheel(3), Err(SchemeError::WheelTooSmall(3))));
    }

    #[test]
    fn triangle_scheme_is_valid() {
        let s = triangle_scheme([0, 1, 2], 3);
        s.validate_structure(Strictness::Standard).unwrap();
        assert_eq!(words(&s), vec!["123"]);
        assert_eq!(s.count_guaranteed(), 1);
    }

    #[test]
    fn validation_rejects_mutations() {
        let mut s = scheme_for_wheel(6).unwrap();
        // Clash with the parent color: entry under E4=1 recolored to 1.
        let idx = s.columns[3].entries.iter().position(|e| e.parent == Some(0)).unwrap();
        s.columns[3].entries[idx].colors = ColorSet::single(1);
        assert!(matches!(
            s.validate_structure(Strictness::Standard),
            Err(SchemeError::AdjacentClash { .. }) | Err(SchemeError::ImproperWord(_))
        ));

        let mut s = scheme_for_wheel(6).unwrap();
        s.columns.last_mut().unwrap().entries.pop();
        assert!(s.validate_structure(Strictness::Standard).is_err());

        let mut s = scheme_for_wheel(5).unwrap();
        s.graph_gamma = 6;
        assert!(matches!(
            s.validate_structure(Strictness::Standard),
            Err(SchemeError::GammaMismatch { .. })
        ));
    }

    #[test]
    fn subscheme_suffix_property() {
        let s = scheme_for_wheel(7).unwrap();
        for col in 0..s.columns.len() {
            for idx in 0..s.columns[col].entries.len() {
                let sub = s.subscheme(col, idx).unwrap();
                let suffixes: BTreeSet<String> = s
                    .rows()
                    .iter()
                    .filter(|r| r[col] == idx)
                    .flat_map(|r| {
                        // expand the suffix of this row from col on
                        let mut partial = vec![String::new()];
                        for (c, &i) in r.iter().enumerate().skip(col) {
                            let mut next = Vec::new();
                            for w in &partial {
                                for color in s.columns[c].entries[i].colors.iter() {
                                    next.push(format!("{w}{color}"));
                                }
                            }
                            partial = next;
                        }
                        partial
                    })
                    .collect();
                assert_eq!(sub.enumerate_all(), suffixes, "col {col} idx {idx}");
            }
        }
        assert!(matches!(s.subscheme(2, 99), Err(SchemeError::ForeignEntry { .. })));
    }

    #[test]
    fn canonical_equal_up_to_34_swap_and_sibling_order() {
        let s = scheme_for_wheel(6).unwrap();
        let t = s.permuted(&[0, 1, 2, 4, 3]);
        assert!(canonical_equal(&s, &t));
        // A permutation moving color 2 is not part of the normalization…
        let u = s.permuted(&[0, 1, 4, 3, 2]);
        assert!(!canonical_equal(&s, &u));
        // …but the full-permutation report finds it.
        assert!(equivalent_under(&s, &u).is_some());
        assert!(!canonical_equal(&scheme_for_wheel(5).unwrap(), &s));
    }

    #[test]
    fn canonicalized_sorts_siblings_without_changing_words() {
        let s = scheme_for_wheel(6).unwrap();
        let mut shuffled = s.clone();
        // Swap the two entries of column 2 and fix up parents in column 3.
        shuffled.columns[2].entries.swap(0, 1);
        for e in shuffled.columns[3].entries.iter_mut() {
            e.parent = Some(1 - e.parent.unwrap());
        }
        assert_ne!(shuffled, s);
        assert_eq!(shuffled.canonicalized(), s.canonicalized());
        assert_eq!(shuffled.enumerate_all(), s.enumerate_all());
        assert!(canonical_equal(&shuffled, &s));
    }

    #[test]
    fn json_roundtrip() {
        let s = scheme_for_wheel(7).unwrap();
        let t = Scheme::from_json(&s.to_json()).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn pretty_prints_a_staircase() {
        let s = scheme_for_wheel(5).unwrap();
        let p = s.pretty();
        let lines: Vec<&str> = p.lines().collect();
        assert_eq!(lines[0].split_whitespace().collect::<Vec<_>>(), vec!["v0", "v1", "v3", "v4", "v5"]);
        // 4 rows of cells below the header.
        assert_eq!(lines.len(), 5);
        assert!(p.contains("2,4"), "bonus cell shows both colors");
    }
}
