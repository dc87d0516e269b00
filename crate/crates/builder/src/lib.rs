//! Attachment calculus for fast-maximal plane graphs.
//!
//! A graph is grown from a seed (a triangle or a wheel) by attachment
//! operations along its boundary: gluing a wheel over a run of boundary
//! vertices, inserting a chord that covers one boundary vertex, fanning a
//! single new vertex over a run, or laying an arc of new vertices over one
//! covered vertex.  Every operation rewrites the plane embedding and the
//! coloring scheme together, so each intermediate state carries a certificate
//! for at least 2^(γ−3) boundary-distinct proper 4-colorings.
//!
//! [`run_script`] replays a small text DSL describing such constructions and
//! re-validates graph and scheme after every step; [`compose_at_cut`] joins
//! two finished pieces at a shared vertex, a shared edge, or a fixed pattern
//! of bridge edges and reports the combined lower bound.

mod compose;
mod random;
mod script;

pub use compose::{compose_at_cut, Composition, CutShape};
pub use random::random_script;
pub use script::{
    apply_op, parse_script, run_script, validate_static, AttachmentOp, BuildResult, Config,
    ConstructionScript, Script, Seed, StepLog,
};

use planar_core::{Embedding, VertexId};
use scheme::{Color, ColorSet, Column, Entry, Scheme};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum BuilderError {
    /// The requested operation does not fit the current boundary.
    #[error("invalid attachment: {0}")]
    InvalidAttachment(String),
    /// The operation fits positionally but the scheme at the site has a shape
    /// the calculus does not rewrite (multi-color cells inside the site, a
    /// degenerate palette, …).
    #[error("unsupported site: {0}")]
    UnsupportedSite(String),
    /// The scheme's columns do not track the graph's boundary walk.
    #[error("scheme out of step with the boundary: {0}")]
    Misaligned(String),
    #[error("script line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("step {index} ({op}): {source}")]
    Step { index: usize, op: String, source: Box<BuilderError> },
    /// A scheme word failed the oracle cross-check.
    #[error("unsound scheme: boundary word {word} has no full coloring")]
    Unsound { word: String },
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Planar(#[from] planar_core::PlanarError),
    #[error(transparent)]
    Scheme(#[from] scheme::SchemeError),
    #[error(transparent)]
    Oracle(#[from] coloring_oracle::OracleError),
    #[error(transparent)]
    Blocks(#[from] blocks::BlockError),
}

pub type Result<T> = std::result::Result<T, BuilderError>;

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

/// Boundary walk of `g`, checked against the scheme's columns: column i must
/// belong to the i-th boundary vertex.  All attachment surgery relies on this
/// alignment.
fn check_alignment(g: &Embedding, s: &Scheme) -> Result<Vec<VertexId>> {
    let b = g.boundary_walk();
    if s.columns.len() != b.len() || s.graph_gamma != b.len() {
        return Err(BuilderError::Misaligned(format!(
            "scheme has {} columns for boundary length {}",
            s.columns.len(),
            b.len()
        )));
    }
    for (i, col) in s.columns.iter().enumerate() {
        if col.vertex != b[i] {
            return Err(BuilderError::Misaligned(format!(
                "column {} belongs to vertex {} but the boundary has {}",
                i, col.vertex, b[i]
            )));
        }
    }
    Ok(b)
}

/// Insert `run` into a rotation cyclically just before `next`.  When `next`
/// is the owner's current boundary-successor the run lands in the outer-face
/// gap, which is exactly where new neighbours of a boundary vertex belong.
fn insert_gap(rot: &mut Vec<VertexId>, next: VertexId, run: &[VertexId]) {
    let i = rot
        .iter()
        .position(|&x| x == next)
        .expect("anchor is a neighbour");
    for (d, &r) in run.iter().enumerate() {
        rot.insert(i + d, r);
    }
}

/// Require every cell of a column to carry a single color; attachment sites
/// must sit in a standard region of the scheme.
fn require_single_column(s: &Scheme, col: usize, what: &str) -> Result<()> {
    for e in &s.columns[col].entries {
        if e.colors.len() != 1 {
            return Err(BuilderError::UnsupportedSite(format!(
                "{what} (column {col}) carries a multi-color cell"
            )));
        }
    }
    Ok(())
}

fn single(cs: ColorSet) -> Color {
    debug_assert_eq!(cs.len(), 1);
    cs.min_color().expect("non-empty cell")
}

/// Ancestor walk: returns the path entry index at column `lo` together with
/// the cell colors of columns lo..=col along the path of (col, idx).
fn path_colors(s: &Scheme, col: usize, idx: usize, lo: usize) -> (usize, Vec<ColorSet>) {
    let mut colors = vec![s.columns[col].entries[idx].colors];
    let mut c = col;
    let mut i = idx;
    while c > lo {
        i = s.columns[c].entries[i].parent.expect("non-root column");
        c -= 1;
        colors.push(s.columns[c].entries[i].colors);
    }
    colors.reverse();
    (i, colors)
}

/// For `pairs` of (entry index in `col`, its new index), list the children in
/// column col+1 as (old child index, new parent index), grouped under each
/// pair in order.
fn child_carry(s: &Scheme, col: usize, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut next = Vec::new();
    if col + 1 >= s.columns.len() {
        return next;
    }
    for &(oi, ni) in pairs {
        for (ci, ce) in s.columns[col + 1].entries.iter().enumerate() {
            if ce.parent == Some(oi) {
                next.push((ci, ni));
            }
        }
    }
    next
}

/// Copy columns first.. of `s` onto `out`.  `carry` lists which entries of
/// column `first` to copy, as (old index, new parent index), in output order;
/// an old index may appear several times, duplicating its whole subtree.
fn copy_suffix(s: &Scheme, first: usize, carry: Vec<(usize, usize)>, out: &mut Vec<Column>) {
    let mut carry = carry;
    for col in first..s.columns.len() {
        let oldcol = &s.columns[col];
        let mut entries = Vec::new();
        let mut next = Vec::new();
        for &(oi, np) in &carry {
            let e = &oldcol.entries[oi];
            let ni = entries.len();
            entries.push(Entry::new(e.colors, Some(np)));
            if col + 1 < s.columns.len() {
                for (ci, ce) in s.columns[col + 1].entries.iter().enumerate() {
                    if ce.parent == Some(oi) {
                        next.push((ci, ni));
                    }
                }
            }
        }
        out.push(Column { vertex: oldcol.vertex, entries });
        carry = next;
    }
}

/// Merge sibling entries that carry the same colors and word-identical
/// subtrees.  Covering a vertex deletes its column, and rows that differed
/// only there would otherwise survive as duplicates and inflate the count.
fn dedupe_rows(cols: Vec<Column>) -> Vec<Column> {
    let n = cols.len();
    if n == 0 {
        return cols;
    }
    // Subtree signatures, bottom-up; children compared as a sorted multiset
    // because sibling order does not affect the word set.
    let mut intern: HashMap<(ColorSet, Vec<usize>), usize> = HashMap::new();
    let mut sig: Vec<Vec<usize>> = vec![Vec::new(); n];
    for col in (0..n).rev() {
        let mut out = Vec::with_capacity(cols[col].entries.len());
        for (idx, e) in cols[col].entries.iter().enumerate() {
            let mut kids: Vec<usize> = if col + 1 < n {
                cols[col + 1]
                    .entries
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.parent == Some(idx))
                    .map(|(ci, _)| sig[col + 1][ci])
                    .collect()
            } else {
                Vec::new()
            };
            kids.sort_unstable();
            let next = intern.len();
            out.push(*intern.entry((e.colors, kids)).or_insert(next));
        }
        sig[col] = out;
    }
    // Rebuild top-down, keeping one child per distinct signature.
    let mut out: Vec<Column> = cols
        .iter()
        .map(|c| Column { vertex: c.vertex, entries: Vec::new() })
        .collect();
    let mut frontier: Vec<(usize, Option<usize>)> = Vec::new();
    let mut seen_roots: Vec<usize> = Vec::new();
    for (idx, _) in cols[0].entries.iter().enumerate() {
        if !seen_roots.contains(&sig[0][idx]) {
            seen_roots.push(sig[0][idx]);
            frontier.push((idx, None));
        }
    }
    for col in 0..n {
        let mut next_frontier = Vec::new();
        for &(oi, np) in &frontier {
            let ni = out[col].entries.len();
            out[col].entries.push(Entry::new(cols[col].entries[oi].colors, np));
            if col + 1 < n {
                let mut seen: Vec<usize> = Vec::new();
                for (ci, ce) in cols[col + 1].entries.iter().enumerate() {
                    if ce.parent == Some(oi) && !seen.contains(&sig[col + 1][ci]) {
                        seen.push(sig[col + 1][ci]);
                        next_frontier.push((ci, Some(ni)));
                    }
                }
            }
        }
        frontier = next_frontier;
    }
    out
}

/// Drop entries of non-final columns that lost all their children (rows can
/// die during an attachment), re-pointing parents afterwards.
fn prune_dangling(mut cols: Vec<Column>) -> Vec<Column> {
    let n = cols.len();
    if n == 0 {
        return cols;
    }
    let mut keep: Vec<Vec<bool>> = cols.iter().map(|c| vec![true; c.entries.len()]).collect();
    for i in (0..n - 1).rev() {
        for j in 0..cols[i].entries.len() {
            let has_child = cols[i + 1]
                .entries
                .iter()
                .enumerate()
                .any(|(cj, e)| keep[i + 1][cj] && e.parent == Some(j));
            keep[i][j] = has_child;
        }
    }
    let mut maps: Vec<Vec<Option<usize>>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut map = vec![None; cols[i].entries.len()];
        let mut next = 0;
        for j in 0..cols[i].entries.len() {
            if keep[i][j] {
                map[j] = Some(next);
                next += 1;
            }
        }
        maps.push(map);
    }
    for i in 0..n {
        let mut entries = Vec::new();
        for (j, e) in cols[i].entries.iter().enumerate() {
            if maps[i][j].is_some() {
                let parent = e
                    .parent
                    .map(|p| maps[i - 1][p].expect("kept entry under dropped parent"));
                entries.push(Entry::new(e.colors, parent));
            }
        }
        cols[i].entries = entries;
    }
    cols
}

// ---------------------------------------------------------------------------
// attach_edge
// ---------------------------------------------------------------------------

/// Insert the chord u–w where u, v, w are the boundary vertices at positions
/// at, at+1, at+2 (1-based; at+2 wraps to position 1).  The chord covers v.
///
/// The scheme loses v's column.  Where w's colors clash with the u-cell above
/// them the rows die; at the right-hand end of the boundary the surviving
/// alternatives merge into one cell so that the final column stays paired
/// with the one before it.
pub fn attach_edge(g: &Embedding, s: &Scheme, at: usize) -> Result<(Embedding, Scheme)> {
    let b = check_alignment(g, s)?;
    let gamma = b.len();
    if gamma < 4 {
        return Err(BuilderError::InvalidAttachment(
            "a chord needs boundary length at least 4".into(),
        ));
    }
    if at < 2 || at > gamma - 1 {
        return Err(BuilderError::InvalidAttachment(format!(
            "chord position {at} out of range (need 2 <= at <= {})",
            gamma - 1
        )));
    }
    let u = b[at - 1];
    let v = b[at];
    let iw = (at + 1) % gamma; // 0-based index of w
    let w = b[iw];
    if g.is_adjacent(u, w) {
        return Err(BuilderError::InvalidAttachment(format!(
            "chord endpoints {u} and {w} are already adjacent"
        )));
    }

    let mut rot = g.rotations().to_vec();
    insert_gap(&mut rot[u], v, &[w]);
    let w_next = b[(iw + 1) % gamma];
    insert_gap(&mut rot[w], w_next, &[u]);
    let g2 = Embedding::new(rot, g.base_side())?;

    let cc = at; // 0-based column of the covered vertex
    let cols = if cc <= gamma - 3 {
        edge_scheme_plain(s, cc, w)?
    } else if cc == gamma - 2 {
        edge_scheme_coupled(s)?
    } else {
        edge_scheme_wrap(s)?
    };
    let s2 = Scheme { graph_gamma: gamma - 1, columns: dedupe_rows(prune_dangling(cols)) };
    Ok((g2, s2))
}

/// Covered column strictly before the coupled pair: drop it and re-hang w's
/// column on the u-cells, deleting rows whose w-color equals the u-color.
fn edge_scheme_plain(s: &Scheme, cc: usize, w: VertexId) -> Result<Vec<Column>> {
    require_single_column(s, cc - 1, "the chord's left endpoint")?;
    let mut out: Vec<Column> = s.columns[..cc].to_vec();
    let mut entries = Vec::new();
    let mut pairs = Vec::new();
    for (wi, we) in s.columns[cc + 1].entries.iter().enumerate() {
        let pv = we.parent.expect("covered column is not the base");
        let pu = s.columns[cc].entries[pv].parent.expect("u column exists");
        let a = single(s.columns[cc - 1].entries[pu].colors);
        let nc = we.colors.without(a);
        if nc.is_empty() {
            continue; // row dies: w would clash with u across the new chord
        }
        pairs.push((wi, entries.len()));
        entries.push(Entry::new(nc, Some(pu)));
    }
    out.push(Column { vertex: w, entries });
    let carry = child_carry(s, cc + 1, &pairs);
    copy_suffix(s, cc + 2, carry, &mut out);
    Ok(out)
}

/// Covered vertex is the left half of the coupled pair.  Per u-cell, strike
/// its own color from the pair sets below it and merge what survives into a
/// single final cell.
fn edge_scheme_coupled(s: &Scheme) -> Result<Vec<Column>> {
    let gamma = s.columns.len();
    let ucol = gamma - 3;
    require_single_column(s, ucol, "the chord's left endpoint")?;
    let mut out: Vec<Column> = s.columns[..=ucol].to_vec();
    let vcol = &s.columns[gamma - 2];
    let fcol = &s.columns[gamma - 1];
    let mut entries = Vec::new();
    for (ui, ue) in s.columns[ucol].entries.iter().enumerate() {
        let a = single(ue.colors);
        let mut merged = ColorSet::of(&[]);
        for (vi, ve) in vcol.entries.iter().enumerate() {
            if ve.parent != Some(ui) {
                continue;
            }
            for fe in fcol.entries.iter().filter(|fe| fe.parent == Some(vi)) {
                merged = merged.union(fe.colors.without(a));
            }
        }
        if !merged.is_empty() {
            entries.push(Entry::new(merged, Some(ui)));
        }
    }
    out.push(Column { vertex: fcol.vertex, entries });
    Ok(out)
}

/// Covered vertex is the last one; the chord runs from the next-to-last
/// boundary vertex to E1.  Cells colored 1 die (they now touch E1) and the
/// survivors under each cell of column γ−3 merge into its one final cell.
fn edge_scheme_wrap(s: &Scheme) -> Result<Vec<Column>> {
    let gamma = s.columns.len();
    let ucol = gamma - 2;
    require_single_column(s, ucol, "the chord's left endpoint")?;
    let pcol = ucol - 1;
    let mut out: Vec<Column> = s.columns[..=pcol].to_vec();
    let mut entries = Vec::new();
    for (pi, _) in s.columns[pcol].entries.iter().enumerate() {
        let mut merged = ColorSet::of(&[]);
        for ue in s.columns[ucol].entries.iter().filter(|ue| ue.parent == Some(pi)) {
            if single(ue.colors) != 1 {
                merged = merged.union(ue.colors);
            }
        }
        if !merged.is_empty() {
            entries.push(Entry::new(merged, Some(pi)));
        }
    }
    out.push(Column { vertex: s.columns[ucol].vertex, entries });
    Ok(out)
}

// ---------------------------------------------------------------------------
// attach_vertex
// ---------------------------------------------------------------------------

/// Fan one new vertex over the k boundary vertices at positions at..at+k−1
/// (1-based), covering the k−2 inner ones.  The new vertex stays on the
/// boundary between the two endpoints.
///
/// Its column holds, per surviving row, the complement of the colors seen in
/// the old window; rows whose complement is empty die.  Cells here may carry
/// two colors, which is the calculus's "free choice" mechanism: later
/// operations must leave such vertices uncovered.
pub fn attach_vertex(g: &Embedding, s: &Scheme, k: usize, at: usize) -> Result<(Embedding, Scheme)> {
    let b = check_alignment(g, s)?;
    let gamma = b.len();
    if k < 3 {
        return Err(BuilderError::InvalidAttachment("a fanned vertex needs k >= 3".into()));
    }
    if at < 2 || at + k - 1 > gamma {
        return Err(BuilderError::InvalidAttachment(format!(
            "vertex site {at}..{} does not fit the boundary (gamma={gamma}, covered \
             positions must avoid E1 and E2)",
            at + k - 1
        )));
    }
    let site: Vec<VertexId> = b[at - 1..at + k - 1].to_vec();

    let estar = g.n_vertices();
    let mut rot = g.rotations().to_vec();
    rot.push(site.iter().rev().cloned().collect());
    for (i, &sv) in site.iter().enumerate() {
        let bn = b[(at - 1 + i + 1) % gamma];
        insert_gap(&mut rot[sv], bn, &[estar]);
    }
    let g2 = Embedding::new(rot, g.base_side())?;

    let p = at - 1;
    let q = p + k - 1;
    let final_q = q == gamma - 1;
    let mut out: Vec<Column> = s.columns[..=p].to_vec();
    let mut ecol: Vec<Entry> = Vec::new();
    let mut kcol: Vec<Entry> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (zi, ze) in s.columns[q].entries.iter().enumerate() {
        let (g1i, colors) = path_colors(s, q, zi, p);
        let g1_colors = colors[0];
        let covered: Vec<ColorSet> = colors[1..colors.len() - 1].to_vec();
        if final_q && ze.colors.len() > 1 {
            // Split a final pair set: each alternative becomes its own row.
            for zc in ze.colors.iter() {
                let est = complement_over(g1_colors.with(zc), &covered);
                if est.is_empty() {
                    continue;
                }
                ecol.push(Entry::new(est, Some(g1i)));
                kcol.push(Entry::new(ColorSet::single(zc), Some(ecol.len() - 1)));
            }
        } else {
            let est = complement_over(g1_colors.union(ze.colors), &covered);
            if est.is_empty() {
                continue;
            }
            ecol.push(Entry::new(est, Some(g1i)));
            pairs.push((zi, kcol.len()));
            kcol.push(Entry::new(ze.colors, Some(ecol.len() - 1)));
        }
    }
    out.push(Column { vertex: estar, entries: ecol });
    out.push(Column { vertex: b[q], entries: kcol });
    if !final_q {
        let carry = child_carry(s, q, &pairs);
        copy_suffix(s, q + 1, carry, &mut out);
    }
    let s2 = Scheme { graph_gamma: gamma - k + 3, columns: dedupe_rows(prune_dangling(out)) };
    Ok((g2, s2))
}

/// Colors available to the new vertex: not in `fixed`, and avoidable against
/// the covered cells.  A covered cell with several colors is a free interior
/// choice, so the union over its alternatives counts.
fn complement_over(fixed: ColorSet, covered: &[ColorSet]) -> ColorSet {
    match covered.split_first() {
        None => ColorSet::all().minus(fixed),
        Some((first, rest)) => {
            let mut acc = ColorSet::of(&[]);
            for c in first.iter() {
                acc = acc.union(complement_over(fixed.with(c), rest));
            }
            acc
        }
    }
}

// ---------------------------------------------------------------------------
// attach_bogen
// ---------------------------------------------------------------------------

/// Lay an arc of len−1 new vertices over the boundary vertex at position
/// at+1, anchored at positions at and at+2.  Every arc vertex is fanned onto
/// the covered vertex; only the last arc vertex actually covers it.
///
/// Internally the arc grows vertex by vertex: each open step inserts a
/// degree-2 vertex (the start of an arc), and the closing step is a k=3
/// vertex fan.  Arc vertices keep their free color choices, so they must
/// stay on the boundary for good.
pub fn attach_bogen(g: &Embedding, s: &Scheme, len: usize, at: usize) -> Result<(Embedding, Scheme)> {
    let b = check_alignment(g, s)?;
    let gamma = b.len();
    if len < 2 {
        return Err(BuilderError::InvalidAttachment("an arc needs length at least 2".into()));
    }
    if at < 2 || at + 2 > gamma {
        return Err(BuilderError::InvalidAttachment(format!(
            "arc window {at}..{} does not fit the boundary (gamma={gamma})",
            at + 2
        )));
    }
    let mut cur = (g.clone(), s.clone());
    for j in 0..len - 2 {
        cur = insert_degree_two(&cur.0, &cur.1, at + j)?;
    }
    attach_vertex(&cur.0, &cur.1, 3, at + len - 2)
}

/// Open arc step: a new vertex adjacent to exactly the boundary vertices at
/// positions at and at+1, inserted between them.  Its column branches into
/// both colors missing from those two neighbours, duplicating the right-hand
/// subtree under each choice.
fn insert_degree_two(g: &Embedding, s: &Scheme, at: usize) -> Result<(Embedding, Scheme)> {
    let b = check_alignment(g, s)?;
    let gamma = b.len();
    debug_assert!(at >= 2 && at + 1 <= gamma);
    let x = b[at - 1];
    let y = b[at];

    let v = g.n_vertices();
    let mut rot = g.rotations().to_vec();
    rot.push(vec![y, x]);
    insert_gap(&mut rot[x], y, &[v]);
    let y_next = b[(at + 1) % gamma];
    insert_gap(&mut rot[y], y_next, &[v]);
    let g2 = Embedding::new(rot, g.base_side())?;

    let xcol = at - 1;
    let mut out: Vec<Column> = s.columns[..=xcol].to_vec();
    let mut vcol: Vec<Entry> = Vec::new();
    let mut carry: Vec<(usize, usize)> = Vec::new();
    for (yi, ye) in s.columns[at].entries.iter().enumerate() {
        let xi = ye.parent.expect("open arc site is past the base");
        let banned = s.columns[xcol].entries[xi].colors.union(ye.colors);
        for c in ColorSet::all().minus(banned).iter() {
            carry.push((yi, vcol.len()));
            vcol.push(Entry::new(ColorSet::single(c), Some(xi)));
        }
    }
    out.push(Column { vertex: v, entries: vcol });
    copy_suffix(s, at, carry, &mut out);
    let s2 = Scheme { graph_gamma: gamma + 1, columns: prune_dangling(out) };
    Ok((g2, s2))
}

// ---------------------------------------------------------------------------
// attach_wheel
// ---------------------------------------------------------------------------

/// Glue a wheel with n rim vertices onto the k boundary vertices at positions
/// at..at+k−1 (1-based), identifying k consecutive rim vertices with the
/// site.  m = n−k+2 counts the rim vertices that remain free, including the
/// two shared endpoints; the k−2 inner site vertices are covered.
///
/// For m = 2 the wheel degenerates: all rim vertices are glued and the hub is
/// interior from the start, which is the same as fanning a vertex over the
/// site and immediately covering it with a chord.
pub fn attach_wheel(
    g: &Embedding,
    s: &Scheme,
    n: usize,
    k: usize,
    at: usize,
) -> Result<(Embedding, Scheme)> {
    if n < 3 {
        return Err(BuilderError::InvalidAttachment("a wheel needs at least 3 rim vertices".into()));
    }
    if k < 3 || k > n {
        return Err(BuilderError::InvalidAttachment(format!(
            "wheel site must take 3 <= k <= n rim vertices, got k={k}, n={n}"
        )));
    }
    let m = n - k + 2;
    if m == 2 {
        let (g1, s1) = attach_vertex(g, s, k, at)?;
        return attach_edge(&g1, &s1, at);
    }

    let b = check_alignment(g, s)?;
    let gamma = b.len();
    if at < 2 || at + k - 1 > gamma {
        return Err(BuilderError::InvalidAttachment(format!(
            "wheel site {at}..{} does not fit the boundary (gamma={gamma}, covered \
             positions must avoid E1 and E2)",
            at + k - 1
        )));
    }
    let site: Vec<VertexId> = b[at - 1..at + k - 1].to_vec();

    // -- embedding surgery ---------------------------------------------------
    let hub = g.n_vertices();
    let rims: Vec<VertexId> = (hub + 1..hub + m - 1).collect(); // r_2..r_{m−1}
    let mut chain = vec![site[0]];
    chain.extend(&rims);
    chain.push(site[k - 1]);
    let mut rot = g.rotations().to_vec();
    let mut hub_rot = chain.clone();
    hub_rot.extend(site[1..k - 1].iter().rev());
    rot.push(hub_rot);
    for (i, &r) in rims.iter().enumerate() {
        debug_assert_eq!(r, rot.len());
        let j = i + 1; // position of r in the chain
        rot.push(vec![chain[j + 1], hub, chain[j - 1]]);
    }
    insert_gap(&mut rot[site[0]], site[1], &[chain[1], hub]);
    for i in 1..k - 1 {
        insert_gap(&mut rot[site[i]], site[i + 1], &[hub]);
    }
    let after = b[(at + k - 1) % gamma];
    insert_gap(&mut rot[site[k - 1]], after, &[hub, chain[m - 2]]);
    let g2 = Embedding::new(rot, g.base_side())?;

    // -- scheme surgery ------------------------------------------------------
    let p = at - 1;
    let q = p + k - 1;
    let case_end = q == gamma - 1; // the site reaches the last boundary vertex
    for col in p..q {
        require_single_column(s, col, "wheel site")?;
    }
    if !case_end {
        require_single_column(s, q, "wheel site")?;
    }

    // Per cell x of g_1's column: palette = x's color plus the two child
    // colors below it; the hub takes the fourth color.  The free rim runs
    // through the palette while avoiding the hub color.
    #[derive(Clone)]
    struct BandCell {
        color: Color,
        pal: ColorSet,
        hubc: Color,
        x: usize,
        parent: usize,
    }
    let xcol = &s.columns[p];
    let mut cur: Vec<BandCell> = Vec::new();
    for (xi, xe) in xcol.entries.iter().enumerate() {
        let a = single(xe.colors);
        let mut pal = xe.colors;
        for ce in s.columns[p + 1].entries.iter().filter(|ce| ce.parent == Some(xi)) {
            pal = pal.union(ce.colors);
        }
        if pal.len() != 3 {
            return Err(BuilderError::UnsupportedSite(format!(
                "site cell with palette of {} colors; expected the standard 3",
                pal.len()
            )));
        }
        let hubc = single(ColorSet::all().minus(pal));
        for c in pal.without(a).iter() {
            cur.push(BandCell { color: c, pal, hubc, x: xi, parent: xi });
        }
    }
    let mut out: Vec<Column> = s.columns[..=p].to_vec();
    for (bi, &rim) in rims.iter().enumerate() {
        out.push(Column {
            vertex: rim,
            entries: cur
                .iter()
                .map(|c| Entry::new(ColorSet::single(c.color), Some(c.parent)))
                .collect(),
        });
        if bi + 1 < rims.len() {
            let mut nxt = Vec::new();
            for (ci, cell) in cur.iter().enumerate() {
                for c2 in cell.pal.without(cell.color).iter() {
                    nxt.push(BandCell {
                        color: c2,
                        pal: cell.pal,
                        hubc: cell.hubc,
                        x: cell.x,
                        parent: ci,
                    });
                }
            }
            cur = nxt;
        }
    }

    // g_k's new column: per free-rim leaf, each palette color distinct from
    // the leaf that some old row under the same x supports.  A supporting row
    // keeps all covered colors off the hub color; its far end provides the
    // subtree (or, at the boundary's end, the pair colors) to hang below.
    let mut kentries: Vec<Entry> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (li, leaf) in cur.iter().enumerate() {
        if case_end {
            let mut cset = ColorSet::of(&[]);
            for c in leaf.pal.without(leaf.color).iter() {
                let supported = s.columns[q].entries.iter().enumerate().any(|(zi, ze)| {
                    let (anc, colors) = path_colors(s, q, zi, p);
                    anc == leaf.x
                        && ze.colors.contains(c)
                        && colors[1..colors.len() - 1]
                            .iter()
                            .all(|cs| !cs.contains(leaf.hubc))
                });
                if supported {
                    cset = cset.with(c);
                }
            }
            if !cset.is_empty() {
                kentries.push(Entry::new(cset, Some(li)));
            }
        } else {
            for c in leaf.pal.without(leaf.color).iter() {
                let mut pick: Option<usize> = None;
                for (zi, ze) in s.columns[q].entries.iter().enumerate() {
                    if ze.colors != ColorSet::single(c) {
                        continue;
                    }
                    let (anc, colors) = path_colors(s, q, zi, p);
                    if anc != leaf.x
                        || colors[1..colors.len() - 1].iter().any(|cs| cs.contains(leaf.hubc))
                    {
                        continue;
                    }
                    // Prefer the row whose covered neighbour matches the leaf:
                    // its subtree then continues the band seamlessly.
                    if colors[colors.len() - 2] == ColorSet::single(leaf.color) {
                        pick = Some(zi);
                        break;
                    }
                    if pick.is_none() {
                        pick = Some(zi);
                    }
                }
                if let Some(zi) = pick {
                    pairs.push((zi, kentries.len()));
                    kentries.push(Entry::new(ColorSet::single(c), Some(li)));
                }
            }
        }
    }
    out.push(Column { vertex: b[q], entries: kentries });
    if !case_end {
        let carry = child_carry(s, q, &pairs);
        copy_suffix(s, q + 1, carry, &mut out);
    }
    let s2 = Scheme { graph_gamma: gamma + m - k, columns: prune_dangling(out) };
    Ok((g2, s2))
}
