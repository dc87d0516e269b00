//! Block types for the coupled end of a coloring scheme.
//!
//! Away from its base, a scheme is locally one of very few shapes: slide a
//! four-column window along the table, rooted at one entry, and the subtree
//! inside the window is always (up to recoloring and sibling order) one of
//! twelve fixed matrices.  Three of them — the `A` kinds — are plain binary
//! trees of single colors and occur wherever the window stays clear of the
//! final column.  The other nine — the `B` and `C` kinds — end in the
//! coupled pair and carry the window's two-color cells.  This crate holds
//! the twelve matrices, classifies windows against them, and derives the
//! facts the rest of the workspace leans on: which kinds may follow which
//! (the FS2 shape check), and which boundary words two windows can share
//! when their graphs are glued along two, three or four vertices.

use scheme::{Color, ColorSet, Column, Entry, Scheme};
use std::collections::{BTreeMap, BTreeSet};

pub type Result<T> = std::result::Result<T, BlockError>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("window columns have lengths {0:?}, not a block shape")]
    BadShape(Vec<usize>),
    #[error("window matches no block kind")]
    NoMatch,
    #[error("overlap must be 2, 3 or 4, got {0}")]
    BadOverlap(usize),
    #[error("column {col}: {what}")]
    Fs2 { col: usize, what: String },
    #[error(transparent)]
    Scheme(#[from] scheme::SchemeError),
}

/// The twelve window matrices.  `A1`–`A3` are the interior (plain-tree)
/// kinds, named by their root color 1, 2, 4; the rest close the table.
/// `B` kinds keep every interior cell single and place one double in the
/// final column; `C` kinds place two.  Only the odd `C` numbers are kinds of
/// their own: `C2`, `C4`, `C6` are the same tables with the root's children
/// written in the other order, which [`classify`] reports through the row
/// order instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    C1,
    C3,
    C5,
}

use BlockKind::*;

impl BlockKind {
    pub const ALL: [BlockKind; 12] = [A1, A2, A3, B1, B2, B3, B4, B5, B6, C1, C3, C5];

    /// Interior kinds: perfect binary trees of single colors.
    pub fn is_normal(self) -> bool {
        matches!(self, A1 | A2 | A3)
    }

    /// Kinds whose window ends in the coupled final column.
    pub fn is_coupled_end(self) -> bool {
        !self.is_normal()
    }

    /// Color of the single root cell of the canonical matrix.
    pub fn parent_color(self) -> Color {
        match self {
            A1 | B1 | B2 | C1 => 1,
            A2 | B3 | B4 | C3 => 2,
            A3 | B5 | B6 | C5 => 4,
        }
    }

    /// The canonical matrix as a four-column mini scheme (vertices 0..=3).
    /// All twelve use the support {1, 2, 4}; windows over other color
    /// triples are images of these under a permutation.
    pub fn canonical(self) -> Scheme {
        match self {
            // Plain trees, keyed by root color.  Each entry branches into
            // the two support colors it may take, grandparent's color first.
            A1 => plain_tree(1),
            A2 => plain_tree(2),
            A3 => plain_tree(4),
            // One-double kinds B(p, q, r): root p, children q then r; the
            // color q never reappears in the final column.
            B1 => one_double(1, 2, 4),
            B2 => one_double(1, 4, 2),
            B3 => one_double(2, 1, 4),
            B4 => one_double(2, 4, 1),
            B5 => one_double(4, 1, 2),
            B6 => one_double(4, 2, 1),
            // Two-double kinds C(p): root p never reappears at the end.
            C1 => two_double(1),
            C3 => two_double(2),
            C5 => two_double(4),
        }
    }

    /// The support color missing from the canonical final column.  Coupled
    /// kinds exclude exactly one (it is spoken for by the boundary vertex
    /// just beyond the window); interior kinds exclude none.
    pub fn forbidden_color(self) -> Option<Color> {
        let canon = self.canonical();
        let support =
            canon.columns.iter().flat_map(|c| &c.entries).fold(ColorSet::EMPTY, |s, e| s.union(e.colors));
        let finals = canon
            .columns
            .last()
            .unwrap()
            .entries
            .iter()
            .fold(ColorSet::EMPTY, |s, e| s.union(e.colors));
        support.minus(finals).min_color()
    }

    /// All boundary words along the window, root first.
    pub fn words(self) -> BTreeSet<String> {
        self.canonical().enumerate_all()
    }

    pub fn name(self) -> &'static str {
        match self {
            A1 => "A1",
            A2 => "A2",
            A3 => "A3",
            B1 => "B1",
            B2 => "B2",
            B3 => "B3",
            B4 => "B4",
            B5 => "B5",
            B6 => "B6",
            C1 => "C1",
            C3 => "C3",
            C5 => "C5",
        }
    }

    pub fn from_name(name: &str) -> Option<BlockKind> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl std::fmt::Display for BlockKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

const SUPPORT: [Color; 3] = [1, 2, 4];

fn support_without(used: &[Color]) -> Vec<Color> {
    SUPPORT.iter().copied().filter(|c| !used.contains(c)).collect()
}

fn mini(columns: Vec<Vec<(ColorSet, Option<usize>)>>) -> Scheme {
    let columns = columns
        .into_iter()
        .enumerate()
        .map(|(v, entries)| Column {
            vertex: v,
            entries: entries.into_iter().map(|(colors, parent)| Entry::new(colors, parent)).collect(),
        })
        .collect::<Vec<_>>();
    Scheme { graph_gamma: columns.len(), columns }
}

/// A(p): root p, then every entry branches into the two support colors
/// different from its own, the grandparent's color listed first (it is the
/// one guaranteed free again, and leading with it keeps the deeper windows
/// aligned with the coupled-end matrices).
fn plain_tree(p: Color) -> Scheme {
    let kids = support_without(&[p]);
    let mut col2 = Vec::new();
    let mut col3 = Vec::new();
    for (i, &x) in kids.iter().enumerate() {
        let third = support_without(&[p, x])[0];
        for y in [p, third] {
            let j = col2.len();
            col2.push((ColorSet::single(y), Some(i)));
            let last = support_without(&[x, y])[0];
            for z in [x, last] {
                col3.push((ColorSet::single(z), Some(j)));
            }
        }
    }
    mini(vec![
        vec![(ColorSet::single(p), None)],
        kids.iter().map(|&c| (ColorSet::single(c), Some(0))).collect(),
        col2,
        col3,
    ])
}

/// B(p, q, r): root p over children q, r.  Grandchildren again branch into
/// {p, sibling}; the final column pairs them off so that q never appears —
/// the lone double cell {p, r} sits under the path r, q.
fn one_double(p: Color, q: Color, r: Color) -> Scheme {
    mini(vec![
        vec![(ColorSet::single(p), None)],
        vec![(ColorSet::single(q), Some(0)), (ColorSet::single(r), Some(0))],
        vec![
            (ColorSet::single(p), Some(0)),
            (ColorSet::single(r), Some(0)),
            (ColorSet::single(p), Some(1)),
            (ColorSet::single(q), Some(1)),
        ],
        vec![
            (ColorSet::single(r), Some(0)),
            (ColorSet::single(p), Some(1)),
            (ColorSet::single(r), Some(2)),
            (ColorSet::of(&[p, r]), Some(3)),
        ],
    ])
}

/// C(p): root p over its two complement colors a, b; the final column bans p
/// itself, so both cells under the grandchildren colored p are the full
/// double {a, b}.
fn two_double(p: Color) -> Scheme {
    let kids = support_without(&[p]);
    let (a, b) = (kids[0], kids[1]);
    mini(vec![
        vec![(ColorSet::single(p), None)],
        vec![(ColorSet::single(a), Some(0)), (ColorSet::single(b), Some(0))],
        vec![
            (ColorSet::single(p), Some(0)),
            (ColorSet::single(b), Some(0)),
            (ColorSet::single(p), Some(1)),
            (ColorSet::single(a), Some(1)),
        ],
        vec![
            (ColorSet::of(&[a, b]), Some(0)),
            (ColorSet::single(a), Some(1)),
            (ColorSet::of(&[a, b]), Some(2)),
            (ColorSet::single(b), Some(3)),
        ],
    ])
}

/// All 24 color permutations in lexicographic order (identity first), in
/// the `[Color; 5]` convention of `scheme` (index 0 unused).
pub fn color_perms() -> Vec<[Color; 5]> {
    let mut perms = Vec::with_capacity(24);
    for a in 1..=4u8 {
        for b in 1..=4u8 {
            for c in 1..=4u8 {
                for d in 1..=4u8 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        perms.push([0, a, b, c, d]);
                    }
                }
            }
        }
    }
    perms
}

/// The four-column window rooted at entry (anchor, idx): that entry's
/// subtree, cut off after four columns.  Keeps the host's vertex labels.
pub fn window(s: &Scheme, anchor: usize, idx: usize) -> Result<Scheme> {
    let sub = s.subscheme(anchor, idx)?;
    let columns: Vec<Column> = sub.columns.into_iter().take(4).collect();
    Ok(Scheme { graph_gamma: columns.len(), columns })
}

/// Forget the host's vertex labels so windows from different schemes (or
/// the canonical matrices, which use 0..=3) become comparable.
fn unlabeled(win: &Scheme) -> Scheme {
    Scheme {
        graph_gamma: win.columns.len(),
        columns: win
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| Column { vertex: i, entries: c.entries.clone() })
            .collect(),
    }
}

/// How a concrete window realizes its kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: BlockKind,
    /// `perm[c]` = color the window uses where the canonical matrix has c
    /// (index 0 unused).
    pub perm: [Color; 5],
    /// `row_order[i]` = row of the window that realizes row i of the
    /// recolored canonical matrix.
    pub row_order: Vec<usize>,
}

impl Classification {
    pub fn is_verbatim(&self) -> bool {
        self.perm == [0, 1, 2, 3, 4] && self.row_order.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn row_cells(s: &Scheme) -> Vec<Vec<ColorSet>> {
    s.rows()
        .iter()
        .map(|row| row.iter().enumerate().map(|(col, &idx)| s.columns[col].entries[idx].colors).collect())
        .collect()
}

fn match_rows(image: &Scheme, window: &Scheme) -> Result<Vec<usize>> {
    let want = row_cells(image);
    let have = row_cells(window);
    let mut used = vec![false; have.len()];
    let mut order = Vec::with_capacity(want.len());
    for cells in &want {
        let j = have
            .iter()
            .enumerate()
            .position(|(j, w)| !used[j] && w == cells)
            .ok_or(BlockError::NoMatch)?;
        used[j] = true;
        order.push(j);
    }
    Ok(order)
}

/// Identify a four-column window: the kind plus the recoloring and row
/// order under which the window is that kind's matrix.  Kinds whose
/// canonical root color equals the window's literal root color are tried
/// first, so a plain tree rooted at 2 reports as `A2` rather than as a
/// recolored `A1`; remaining ties go to the first kind in `BlockKind::ALL`
/// and the lexicographically first permutation.
pub fn classify(win: &Scheme) -> Result<Classification> {
    let shape: Vec<usize> = win.columns.iter().map(|c| c.entries.len()).collect();
    let candidates: Vec<BlockKind> = match shape.as_slice() {
        [1, 2, 4, 8] => BlockKind::ALL.into_iter().filter(|k| k.is_normal()).collect(),
        [1, 2, 4, 4] => BlockKind::ALL.into_iter().filter(|k| k.is_coupled_end()).collect(),
        _ => return Err(BlockError::BadShape(shape)),
    };
    let root = win.columns[0].entries[0].colors;
    if root.len() != 1 {
        return Err(BlockError::NoMatch);
    }
    let root_color = root.min_color().unwrap();
    let plain = unlabeled(win);
    let target = plain.canonicalized();
    let ordered: Vec<BlockKind> = candidates
        .iter()
        .copied()
        .filter(|k| k.parent_color() == root_color)
        .chain(candidates.iter().copied().filter(|k| k.parent_color() != root_color))
        .collect();
    // Literal pass first: a window that is some matrix up to row order must
    // report as that kind, not as a recoloring of an earlier one (B1 and B2
    // are images of each other under 2 ↔ 4, likewise B3/B4 and B5/B6).
    let identity: [Color; 5] = [0, 1, 2, 3, 4];
    for &kind in &ordered {
        let canon = kind.canonical();
        if canon.canonicalized() == target {
            let row_order = match_rows(&canon, &plain)?;
            return Ok(Classification { kind, perm: identity, row_order });
        }
    }
    for &kind in &ordered {
        let canon = kind.canonical();
        for perm in color_perms() {
            if perm[kind.parent_color() as usize] != root_color {
                continue;
            }
            let image = canon.permuted(&perm);
            if image.canonicalized() == target {
                let row_order = match_rows(&image, &plain)?;
                return Ok(Classification { kind, perm, row_order });
            }
        }
    }
    Err(BlockError::NoMatch)
}

fn scheme_key(s: &Scheme) -> Vec<Vec<(i64, Vec<Color>)>> {
    s.columns
        .iter()
        .map(|c| {
            c.entries
                .iter()
                .map(|e| (e.parent.map_or(-1, |p| p as i64), e.colors.iter().collect()))
                .collect()
        })
        .collect()
}

/// The least recoloring of a window over all 24 color permutations, with
/// siblings in canonical order.  Two windows normalize equally iff they are
/// the same table up to recoloring and row order, so the twelve kinds
/// collapse to three normal forms — one per family.  Idempotent.
#[must_use]
pub fn normalize(win: &Scheme) -> Scheme {
    let plain = unlabeled(win);
    color_perms()
        .iter()
        .map(|p| plain.permuted(p).canonicalized())
        .min_by_key(scheme_key)
        .expect("at least one permutation")
}

/// What may stand one column to the right of an interior window: either two
/// more interior windows (the chain continues) or, at the table's end, one
/// coupled kind under each child.  End pairs are constrained twice over —
/// the upper kind's root is the window's upper child color, the lower
/// kind's its lower child color, and both must exclude the *same* color
/// from the final column.  That leaves three pairs per interior kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Successors {
    /// Interior kinds rooted at the window's two children, in child order.
    pub chain: Vec<BlockKind>,
    /// Possible (upper, lower) coupled ends, in `BlockKind::ALL` order of
    /// the upper kind.
    pub end_pairs: Vec<(BlockKind, BlockKind)>,
}

/// Successor table for an interior kind; coupled kinds have none (nothing
/// stands to the right of the final column).
pub fn successors(kind: BlockKind) -> Option<Successors> {
    if !kind.is_normal() {
        return None;
    }
    let canon = kind.canonical();
    let kids: Vec<Color> =
        canon.columns[1].entries.iter().map(|e| e.colors.min_color().unwrap()).collect();
    let interior_for = |c: Color| match c {
        1 => A1,
        2 => A2,
        _ => A3,
    };
    let chain = kids.iter().map(|&c| interior_for(c)).collect();
    let coupled_with_parent = |c: Color| -> Vec<BlockKind> {
        BlockKind::ALL.into_iter().filter(|k| k.is_coupled_end() && k.parent_color() == c).collect()
    };
    let mut end_pairs = Vec::new();
    for upper in coupled_with_parent(kids[0]) {
        for lower in coupled_with_parent(kids[1]) {
            if upper.forbidden_color() == lower.forbidden_color() {
                end_pairs.push((upper, lower));
            }
        }
    }
    Some(Successors { chain, end_pairs })
}

fn reversed(word: &str) -> String {
    word.chars().rev().collect()
}

/// The words along the last `overlap` window columns (suffixes of the full
/// words; the full words themselves for overlap 4).
pub fn window_words(kind: BlockKind, overlap: usize) -> Result<BTreeSet<String>> {
    match overlap {
        4 => Ok(kind.words()),
        2 | 3 => Ok(kind.words().iter().map(|w| w[4 - overlap..].to_string()).collect()),
        _ => Err(BlockError::BadOverlap(overlap)),
    }
}

/// Words two windows can share when their graphs are glued along `overlap`
/// boundary vertices.  The shared stretch runs up one boundary and down the
/// other, so a word `w` read along `x` must appear reversed along `y`:
/// the result is every `w` in `x`'s window words whose reversal is in
/// `y`'s.  Empty means the two kinds cannot meet at that overlap.
pub fn compatible_colorings(x: BlockKind, y: BlockKind, overlap: usize) -> Result<BTreeSet<String>> {
    let wy = window_words(y, overlap)?;
    Ok(window_words(x, overlap)?.into_iter().filter(|w| wy.contains(&reversed(w))).collect())
}

/// All 12 × 12 compatibility cells at overlaps 4, 3 and 2.
pub struct CompatibilityTables {
    cells: BTreeMap<(usize, BlockKind, BlockKind), BTreeSet<String>>,
}

impl CompatibilityTables {
    pub fn get(&self, x: BlockKind, y: BlockKind, overlap: usize) -> &BTreeSet<String> {
        &self.cells[&(overlap, x, y)]
    }

    /// One overlap's table as stable text, one cell per line; `-` = empty.
    pub fn dump(&self, overlap: usize) -> String {
        let mut out = format!(
            "# Shared boundary words for window pairs glued along {overlap} vertices.\n\
             # Cell (X, Y): words read along X whose reversal reads along Y; - = none.\n"
        );
        for x in BlockKind::ALL {
            for y in BlockKind::ALL {
                let cell = self.get(x, y, overlap);
                let text = if cell.is_empty() {
                    "-".to_string()
                } else {
                    cell.iter().cloned().collect::<Vec<_>>().join(" ")
                };
                out.push_str(&format!("{x} {y}: {text}\n"));
            }
        }
        out
    }
}

/// Recompute every compatibility cell from the canonical matrices.
pub fn regenerate_tables() -> CompatibilityTables {
    let mut cells = BTreeMap::new();
    for overlap in [2, 3, 4] {
        for x in BlockKind::ALL {
            for y in BlockKind::ALL {
                cells.insert((overlap, x, y), compatible_colorings(x, y, overlap).unwrap());
            }
        }
    }
    CompatibilityTables { cells }
}

/// A classified window in a host scheme.
#[derive(Debug, Clone)]
pub struct Block {
    pub kind: BlockKind,
    /// Index of the window's first column in the host scheme.
    pub anchor: usize,
    pub window: Scheme,
}

impl Block {
    /// The window as flat rows: one cell path per final entry.
    pub fn rows(&self) -> Vec<Vec<ColorSet>> {
        row_cells(&self.window)
    }
}

/// Classify the windows over the last four columns, one per entry of column
/// γ−4, top to bottom.  Empty for γ < 5 (no four-column end window exists).
pub fn end_blocks(s: &Scheme) -> Result<Vec<Block>> {
    let ncols = s.columns.len();
    if ncols < 5 {
        return Ok(Vec::new());
    }
    let anchor = ncols - 4;
    let mut blocks = Vec::new();
    for idx in 0..s.columns[anchor].entries.len() {
        let win = window(s, anchor, idx)?;
        let class = classify(&win).map_err(|_| BlockError::Fs2 {
            col: anchor,
            what: format!("end window {idx} matches no coupled kind"),
        })?;
        if !class.kind.is_coupled_end() {
            return Err(BlockError::Fs2 {
                col: anchor,
                what: format!("end window {idx} classifies as interior kind {}", class.kind),
            });
        }
        blocks.push(Block { kind: class.kind, anchor, window: win });
    }
    Ok(blocks)
}

/// The end-window shape rule: every four-column window rooted beyond the
/// base is one of the twelve kinds — interior kinds while the window stays
/// clear of the final column, coupled kinds at the end.  For γ = 4 the end
/// degenerates to the two-row coupled pair, which must be the swap form
/// (cells b / a under children a, b) or the one-double form (cells {b, p} /
/// p under the parent color p); γ = 3 has nothing to check.  Expects a
/// scheme that already passed `validate_structure` under standard
/// strictness; returns the end blocks, top to bottom.
pub fn validate_fs2(s: &Scheme) -> Result<Vec<Block>> {
    let ncols = s.columns.len();
    if ncols == 3 {
        return Ok(Vec::new());
    }
    if ncols == 4 {
        coupled_pair_form(s)?;
        return Ok(Vec::new());
    }
    for anchor in 1..ncols - 4 {
        for idx in 0..s.columns[anchor].entries.len() {
            let win = window(s, anchor, idx)?;
            let class = classify(&win).map_err(|_| BlockError::Fs2 {
                col: anchor,
                what: format!("window {idx} matches no kind"),
            })?;
            if !class.kind.is_normal() {
                return Err(BlockError::Fs2 {
                    col: anchor,
                    what: format!("interior window {idx} classifies as coupled kind {}", class.kind),
                });
            }
        }
    }
    end_blocks(s)
}

/// The γ = 4 coupled pair, as described in [`validate_fs2`].
fn coupled_pair_form(s: &Scheme) -> Result<()> {
    let bad = |what: &str| BlockError::Fs2 { col: 2, what: what.into() };
    let kids = &s.columns[2].entries;
    let finals = &s.columns[3].entries;
    if kids.len() != 2 || finals.len() != 2 || kids.iter().any(|e| e.colors.len() != 1) {
        return Err(bad("coupled pair must be two single cells over two cells"));
    }
    let p = s.columns[1].entries[0].colors;
    let (a, b) = (kids[0].colors, kids[1].colors);
    let cell = |under: usize| -> Result<ColorSet> {
        finals
            .iter()
            .find(|e| e.parent == Some(under))
            .map(|e| e.colors)
            .ok_or_else(|| bad("coupling is not a bijection"))
    };
    let (ca, cb) = (cell(0)?, cell(1)?);
    let swap_form = ca == b && cb == a;
    let double_form = (ca == b.union(p) && cb == p) || (cb == a.union(p) && ca == p);
    if !(swap_form || double_form) {
        return Err(bad("coupled pair matches neither two-column form"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use scheme::scheme_for_wheel;

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn canonical_word_sets_are_the_reference_sets() {
        // Interior kinds: all eight proper words over {1,2,4} with the
        // kind's root letter.
        for (kind, first) in [(A1, '1'), (A2, '2'), (A3, '4')] {
            let mut want = BTreeSet::new();
            for w in ["1212", "1214", "1241", "1242", "1412", "1414", "1421", "1424"] {
                let img: String = w
                    .chars()
                    .map(|c| match (first, c) {
                        (_, '1') => first,
                        ('2', '2') => '1',
                        ('4', '4') => '1',
                        (_, other) => other,
                    })
                    .collect();
                want.insert(img);
            }
            assert_eq!(kind.words(), want, "{kind}");
        }
        assert_eq!(B1.words(), set(&["1214", "1241", "1414", "1421", "1424"]));
        assert_eq!(B2.words(), set(&["1212", "1241", "1242", "1412", "1421"]));
        assert_eq!(B3.words(), set(&["2124", "2142", "2412", "2414", "2424"]));
        assert_eq!(B4.words(), set(&["2121", "2141", "2142", "2412", "2421"]));
        assert_eq!(B5.words(), set(&["4124", "4142", "4212", "4214", "4242"]));
        assert_eq!(B6.words(), set(&["4121", "4124", "4141", "4214", "4241"]));
        assert_eq!(C1.words(), set(&["1212", "1214", "1242", "1412", "1414", "1424"]));
        assert_eq!(C3.words(), set(&["2121", "2124", "2141", "2414", "2421", "2424"]));
        assert_eq!(C5.words(), set(&["4121", "4141", "4142", "4212", "4241", "4242"]));
    }

    #[test]
    fn forbidden_colors_partition_the_coupled_kinds() {
        for kind in [A1, A2, A3] {
            assert_eq!(kind.forbidden_color(), None, "{kind}");
        }
        let want = [(B1, 2), (B2, 4), (B3, 1), (B4, 4), (B5, 1), (B6, 2), (C1, 1), (C3, 2), (C5, 4)];
        for (kind, color) in want {
            assert_eq!(kind.forbidden_color(), Some(color), "{kind}");
        }
    }

    #[test]
    fn classify_is_the_identity_on_canonical_matrices() {
        for kind in BlockKind::ALL {
            let class = classify(&kind.canonical()).unwrap();
            assert_eq!(class.kind, kind);
            assert!(class.is_verbatim(), "{kind}: {class:?}");
        }
    }

    #[test]
    fn classify_reports_recolorings_and_row_orders() {
        // Recoloring off the support: swap 3 and 4.
        let swap34 = [0, 1, 2, 4, 3];
        let class = classify(&B1.canonical().permuted(&swap34)).unwrap();
        assert_eq!(class.kind, B1);
        assert_eq!(class.perm, swap34);
        // The even C numbers: C1 with the root's children in the other
        // order is still kind C1, seen through the row order.
        let c2 = mini(vec![
            vec![(ColorSet::single(1), None)],
            vec![(ColorSet::single(4), Some(0)), (ColorSet::single(2), Some(0))],
            vec![
                (ColorSet::single(1), Some(0)),
                (ColorSet::single(2), Some(0)),
                (ColorSet::single(1), Some(1)),
                (ColorSet::single(4), Some(1)),
            ],
            vec![
                (ColorSet::of(&[2, 4]), Some(0)),
                (ColorSet::single(4), Some(1)),
                (ColorSet::of(&[4, 2]), Some(2)),
                (ColorSet::single(2), Some(3)),
            ],
        ]);
        let class = classify(&c2).unwrap();
        assert_eq!(class.kind, C1);
        assert_eq!(class.perm, [0, 1, 2, 3, 4]);
        assert_eq!(class.row_order, vec![2, 3, 0, 1]);
        // A plain tree rooted at 2 is A2 itself, not a recolored A1.
        let class = classify(&A2.canonical()).unwrap();
        assert_eq!((class.kind, class.perm), (A2, [0, 1, 2, 3, 4]));
    }

    #[test]
    fn normalize_collapses_each_family_to_one_form() {
        let forms: Vec<Scheme> =
            BlockKind::ALL.iter().map(|k| normalize(&k.canonical())).collect();
        for (i, x) in BlockKind::ALL.iter().enumerate() {
            for (j, y) in BlockKind::ALL.iter().enumerate() {
                let same_family = x.name().as_bytes()[0] == y.name().as_bytes()[0];
                assert_eq!(forms[i] == forms[j], same_family, "{x} vs {y}");
            }
        }
        // Idempotent, and insensitive to sibling order.
        let n = normalize(&B3.canonical());
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn successor_pairs_share_the_forbidden_color() {
        let s = successors(A1).unwrap();
        assert_eq!(s.chain, vec![A2, A3]);
        assert_eq!(s.end_pairs, vec![(B3, B5), (B4, C5), (C3, B6)]);
        let s = successors(A2).unwrap();
        assert_eq!(s.chain, vec![A1, A3]);
        assert_eq!(s.end_pairs, vec![(B1, B6), (B2, C5), (C1, B5)]);
        let s = successors(A3).unwrap();
        assert_eq!(s.chain, vec![A1, A2]);
        assert_eq!(s.end_pairs, vec![(B1, C3), (B2, B4), (C1, B3)]);
        for kind in BlockKind::ALL.into_iter().filter(|k| k.is_coupled_end()) {
            assert!(successors(kind).is_none(), "{kind}");
        }
    }

    #[test]
    fn compatibility_cells_match_hand_checked_values() {
        let compat = |x, y, k| compatible_colorings(x, y, k).unwrap();
        assert_eq!(compat(A1, A1, 4), set(&["1241", "1421"]));
        assert_eq!(compat(A1, A3, 4), set(&["1214", "1414", "1424"]));
        assert_eq!(compat(B6, B1, 4), set(&["4121", "4141", "4241"]));
        assert_eq!(compat(B5, B5, 4), set(&["4124", "4214"]));
        assert_eq!(compat(A1, C1, 4), set(&[]));
        assert_eq!(compat(A1, A1, 3), set(&["212", "214", "242", "412", "414", "424"]));
        assert_eq!(compat(B1, B1, 3), set(&["414", "424"]));
        assert_eq!(compat(B1, B2, 3), set(&["214"]));
        assert_eq!(compat(B6, B6, 3), set(&["121", "141"]));
        assert!(compat(C1, C1, 3).contains("212"));
        assert_eq!(compat(C5, C5, 3).len(), 6);
        assert_eq!(compat(B1, B1, 2), set(&["14", "41"]));
        assert!(compatible_colorings(A1, A1, 5).is_err());
    }

    #[test]
    fn compatibility_is_symmetric_under_reversal() {
        for overlap in [2, 3, 4] {
            for x in BlockKind::ALL {
                for y in BlockKind::ALL {
                    let xy = compatible_colorings(x, y, overlap).unwrap();
                    let yx: BTreeSet<String> = compatible_colorings(y, x, overlap)
                        .unwrap()
                        .iter()
                        .map(|w| reversed(w))
                        .collect();
                    assert_eq!(xy, yx, "{x} {y} overlap {overlap}");
                }
            }
        }
    }

    #[test]
    fn interior_pairs_are_compatible_at_every_overlap() {
        // Two glued plain-tree windows always share a word, whichever of
        // the three kinds each side shows.
        for overlap in [2, 3, 4] {
            for x in [A1, A2, A3] {
                for y in [A1, A2, A3] {
                    assert!(
                        !compatible_colorings(x, y, overlap).unwrap().is_empty(),
                        "{x} {y} overlap {overlap}"
                    );
                }
            }
        }
        // At overlap 3 every pair whatsoever is compatible.
        for x in BlockKind::ALL {
            for y in BlockKind::ALL {
                assert!(!compatible_colorings(x, y, 3).unwrap().is_empty(), "{x} {y}");
            }
        }
    }

    /// Reference cells for the pairwise tables, recorded independently of
    /// the generating code: one example word per compatible pair (read in
    /// either direction), `-` where the pair shares no word.
    const REFERENCE_44: &[(&str, &str, &str)] = &[
        ("A1", "A1", "1241"),
        ("A1", "A2", "2141"),
        ("A1", "A3", "4212"),
        ("A2", "A2", "2142"),
        ("A2", "A3", "2424"),
        ("A3", "A3", "4214"),
        ("A1", "B1", "1421"),
        ("A1", "B2", "1241"),
        ("A1", "B3", "-"),
        ("A1", "B4", "2121"),
        ("A1", "B5", "-"),
        ("A1", "B6", "4141"),
        ("A2", "B1", "-"),
        ("A2", "B2", "1412"),
        ("A2", "B3", "2412"),
        ("A2", "B4", "2412"),
        ("A2", "B5", "4142"),
        ("A2", "B6", "-"),
        ("A3", "B1", "1414"),
        ("A3", "B2", "-"),
        ("A3", "B3", "2124"),
        ("A3", "B4", "-"),
        ("A3", "B5", "4214"),
        ("A3", "B6", "4214"),
        ("B1", "B1", "1421"),
        ("B2", "B1", "1421"),
        ("B2", "B2", "1241"),
        ("B3", "B1", "-"),
        ("B3", "B2", "-"),
        ("B3", "B3", "2142"),
        ("B4", "B1", "-"),
        ("B4", "B2", "2421"),
        ("B4", "B3", "2142"),
        ("B4", "B4", "2412"),
        ("B5", "B1", "-"),
        ("B5", "B2", "-"),
        ("B5", "B3", "4142"),
        ("B5", "B4", "-"),
        ("B5", "B5", "4242"),
        ("B6", "B1", "4241"),
        ("B6", "B2", "-"),
        ("B6", "B3", "-"),
        ("B6", "B4", "-"),
        ("B6", "B5", "4124"),
        ("B6", "B6", "4124"),
        ("A1", "C1", "-"),
        ("A1", "C3", "2121"),
        ("A1", "C5", "4141"),
        ("A2", "C1", "1212"),
        ("A2", "C3", "-"),
        ("A2", "C5", "4242"),
        ("A3", "C1", "1414"),
        ("A3", "C3", "2424"),
        ("A3", "C5", "-"),
        ("B1", "C1", "-"),
        ("B1", "C3", "-"),
        ("B1", "C5", "1214"),
        ("B2", "C1", "-"),
        ("B2", "C3", "1412"),
        ("B2", "C5", "-"),
        ("B3", "C1", "-"),
        ("B3", "C3", "-"),
        ("B3", "C5", "2124"),
        ("B4", "C1", "2421"),
        ("B4", "C3", "-"),
        ("B4", "C5", "-"),
        ("B5", "C1", "-"),
        ("B5", "C3", "4212"),
        ("B5", "C5", "-"),
        ("B6", "C1", "1424"),
        ("B6", "C3", "-"),
        ("B6", "C5", "-"),
        ("C1", "C1", "-"),
        ("C3", "C1", "1212"),
        ("C3", "C3", "-"),
        ("C5", "C1", "1414"),
        ("C5", "C3", "2124"),
        ("C5", "C5", "-"),
    ];

    const REFERENCE_33: &[(&str, &str, &str)] = &[
        ("A1", "A1", "212"),
        ("A2", "A1", "424"),
        ("A2", "A2", "121"),
        ("A3", "A1", "242"),
        ("A3", "A2", "121"),
        ("A3", "A3", "141"),
        ("A1", "B1", "214"),
        ("A1", "B2", "212"),
        ("A1", "B3", "412"),
        ("A1", "B4", "412"),
        ("A1", "B5", "142"),
        ("A1", "B6", "124"),
        ("A2", "B1", "421"),
        ("A2", "B2", "421"),
        ("A2", "B3", "124"),
        ("A2", "B4", "421"),
        ("A2", "B5", "124"),
        ("A2", "B6", "241"),
        ("A3", "B1", "241"),
        ("A3", "B2", "421"),
        ("A3", "B3", "142"),
        ("A3", "B4", "421"),
        ("A3", "B5", "142"),
        ("A3", "B6", "241"),
        ("B1", "B1", "414"),
        ("B1", "B2", "214"),
        ("B1", "B3", "142"),
        ("B1", "B4", "214"),
        ("B1", "B5", "241"),
        ("B1", "B6", "421"),
        ("B2", "B2", "212"),
        ("B2", "B3", "124"),
        ("B2", "B4", "142"),
        ("B2", "B5", "142"),
        ("B2", "B6", "421"),
        ("B3", "B3", "424"),
        ("B3", "B4", "124"),
        ("B3", "B5", "412"),
        ("B3", "B6", "142"),
        ("B4", "B4", "121"),
        ("B4", "B5", "421"),
        ("B4", "B6", "421"),
        ("B5", "B5", "242"),
        ("B5", "B6", "142"),
        ("B6", "B6", "141"),
        ("C1", "B1", "414"),
        ("C1", "B2", "212"),
        ("C1", "B3", "424"),
        ("C1", "B4", "412"),
        ("C1", "B5", "212"),
        ("C1", "B6", "214"),
        ("C3", "B1", "421"),
        ("C3", "B2", "421"),
        ("C3", "B3", "124"),
        ("C3", "B4", "121"),
        ("C3", "B5", "124"),
        ("C3", "B6", "124"),
        ("C5", "B1", "241"),
        ("C5", "B2", "212"),
        ("C5", "B3", "142"),
        ("C5", "B4", "121"),
        ("C5", "B5", "124"),
        ("C5", "B6", "124"),
        ("A1", "C1", "212"),
        ("A1", "C3", "124"),
        ("A1", "C5", "212"),
        ("A2", "C1", "424"),
        ("A2", "C3", "121"),
        ("A2", "C5", "121"),
        ("A3", "C1", "212"),
        ("A3", "C3", "141"),
        ("A3", "C5", "212"),
        ("C1", "C1", "212"),
        ("C1", "C3", "424"),
        ("C1", "C5", "212"),
        ("C3", "C3", "121"),
        ("C3", "C5", "121"),
        ("C5", "C5", "121"),
    ];

    #[test]
    fn reference_cells_agree_with_the_derived_tables() {
        // A few reference entries are recording slips: two 4-overlap cells
        // are one-digit slips of valid members (4212 for 4121, 4242 for
        // 4124), and the (C5, B5)/(C5, B6) cells repeat the row above
        // them.  For those, only the emptiness pattern is meaningful.
        let slips = [("A1", "A3", 4usize), ("B5", "B5", 4), ("C5", "B5", 3), ("C5", "B6", 3)];
        for (table, overlap) in [(REFERENCE_44, 4usize), (REFERENCE_33, 3)] {
            for &(x, y, cell) in table {
                let (kx, ky) =
                    (BlockKind::from_name(x).unwrap(), BlockKind::from_name(y).unwrap());
                let derived = compatible_colorings(kx, ky, overlap).unwrap();
                if cell == "-" {
                    assert!(derived.is_empty(), "({x}, {y}, {overlap}) should be empty");
                    continue;
                }
                assert!(!derived.is_empty(), "({x}, {y}, {overlap}) should be nonempty");
                if slips.contains(&(x, y, overlap)) {
                    continue;
                }
                let rev = reversed(cell);
                assert!(
                    derived.contains(cell) || derived.contains(&rev),
                    "({x}, {y}, {overlap}): {cell} not derived in either direction"
                );
            }
        }
    }

    #[test]
    fn derived_tables_match_the_frozen_files() {
        let tables = regenerate_tables();
        for (overlap, name) in [(4usize, "table44.txt"), (3, "table33.txt"), (2, "table22.txt")] {
            let path = format!("{}/../../golden/tables/{name}", env!("CARGO_MANIFEST_DIR"));
            let want = tables.dump(overlap);
            if std::env::var_os("REGEN_TABLES").is_some() {
                std::fs::create_dir_all(std::path::Path::new(&path).parent().unwrap()).unwrap();
                std::fs::write(&path, &want).unwrap();
                continue;
            }
            let have = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(have, want, "{name} is out of date with the matrices");
        }
    }

    #[test]
    fn wheel_end_windows_have_the_expected_kinds() {
        let kinds = |n: usize| -> Vec<BlockKind> {
            end_blocks(&scheme_for_wheel(n).unwrap()).unwrap().iter().map(|b| b.kind).collect()
        };
        assert_eq!(kinds(5), vec![B3]);
        assert_eq!(kinds(6), vec![C1, B5]);
        assert_eq!(kinds(7), vec![B3, B5, B3, C1]);
        // The first two windows of the 7-wheel are the matrices verbatim;
        // the third is B3 with the root's children in the other order.
        let s = scheme_for_wheel(7).unwrap();
        let class = |idx: usize| classify(&window(&s, 3, idx).unwrap()).unwrap();
        assert!(class(0).is_verbatim());
        assert!(class(1).is_verbatim());
        assert_eq!(class(2).row_order, vec![2, 3, 0, 1]);
    }

    #[test]
    fn wheel_end_windows_normalize_blockwise() {
        let s = scheme_for_wheel(7).unwrap();
        let win = |idx: usize| window(&s, 3, idx).unwrap();
        // The three one-double windows share one normal form; the
        // two-double window stands apart.
        assert_eq!(normalize(&win(0)), normalize(&win(1)));
        assert_eq!(normalize(&win(1)), normalize(&win(2)));
        assert_ne!(normalize(&win(0)), normalize(&win(3)));
    }

    #[test]
    fn validate_fs2_accepts_wheels_and_rejects_damage() {
        for n in 4..=10 {
            let s = scheme_for_wheel(n).unwrap();
            let blocks = validate_fs2(&s).unwrap();
            let want = if n >= 5 { s.columns[n - 4].entries.len() } else { 0 };
            assert_eq!(blocks.len(), want, "n = {n}");
            assert!(blocks.iter().all(|b| b.kind.is_coupled_end()));
        }
        // Breaking one final cell must be caught.
        let mut s = scheme_for_wheel(6).unwrap();
        s.columns[5].entries[0].colors = ColorSet::single(3);
        assert!(validate_fs2(&s).is_err());
    }

    #[test]
    fn wheel_block_counts_follow_the_recursion() {
        // Growing the wheel turns a one-double end window into {one-double,
        // two-double} and a two-double window into two one-doubles; from
        // {B} at n = 5 the counts follow b' = b + 2c, c' = b.
        let count = |n: usize| -> (usize, usize) {
            end_blocks(&scheme_for_wheel(n).unwrap()).unwrap().iter().fold((0, 0), |(b, c), blk| {
                if blk.kind.name().starts_with('B') {
                    (b + 1, c)
                } else {
                    (b, c + 1)
                }
            })
        };
        let (mut b, mut c) = (1, 0);
        assert_eq!(count(5), (1, 0));
        for n in 6..=10 {
            let next = (b + 2 * c, b);
            assert_eq!(count(n), next, "n = {n}");
            (b, c) = next;
        }
        // The per-window statement, via the parent entries: each end window
        // of the n-wheel sits over an entry whose two children carry the
        // n+1-wheel's end windows.
        for n in 5..=8usize {
            let small = scheme_for_wheel(n).unwrap();
            let large = scheme_for_wheel(n + 1).unwrap();
            let anchor = n - 4;
            let small_blocks = end_blocks(&small).unwrap();
            let large_blocks = end_blocks(&large).unwrap();
            for (idx, parent_block) in small_blocks.iter().enumerate() {
                let mut families: Vec<u8> = large.columns[anchor + 1]
                    .entries
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.parent == Some(idx))
                    .map(|(j, _)| large_blocks[j].kind.name().as_bytes()[0])
                    .collect();
                families.sort_unstable();
                if parent_block.kind.name().starts_with('B') {
                    assert_eq!(families, vec![b'B', b'C'], "n = {n}, window {idx}");
                } else {
                    assert_eq!(families, vec![b'B', b'B'], "n = {n}, window {idx}");
                }
            }
        }
    }

    #[test]
    fn gamma_four_coupled_pair_forms() {
        assert!(validate_fs2(&scheme_for_wheel(4).unwrap()).unwrap().is_empty());
        // The swap form: 1 2 | 1 4 over 4 1.
        let swap = mini(vec![
            vec![(ColorSet::single(1), None)],
            vec![(ColorSet::single(2), Some(0))],
            vec![(ColorSet::single(1), Some(0)), (ColorSet::single(4), Some(0))],
            vec![(ColorSet::single(4), Some(0)), (ColorSet::single(1), Some(1))],
        ]);
        assert!(validate_fs2(&swap).unwrap().is_empty());
        // An unpaired form must fail.
        let bad = mini(vec![
            vec![(ColorSet::single(1), None)],
            vec![(ColorSet::single(2), Some(0))],
            vec![(ColorSet::single(1), Some(0)), (ColorSet::single(4), Some(0))],
            vec![(ColorSet::single(3), Some(0)), (ColorSet::single(3), Some(1))],
        ]);
        assert!(validate_fs2(&bad).is_err());
    }
}
