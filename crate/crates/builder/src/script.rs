//! Construction scripts: a small text format describing how to grow a graph
//! from a seed, plus the replay engine that executes it with full
//! re-validation after every step.
//!
//! ```text
//! # 5-wheel, then a wheel glued over three boundary vertices
//! seed wheel 5
//! attach wheel n=5 k=3 at=3
//! attach edge at=4
//! ```
//!
//! A script may instead consist of a single `compose` line joining two other
//! script files:
//!
//! ```text
//! compose cut shared=2 left=a.fsk right=b.fsk
//! ```

use crate::compose::CutShape;
use crate::{attach_bogen, attach_edge, attach_vertex, attach_wheel, check_alignment, BuilderError, Result};
use coloring_oracle::{extends, lower_bound};
use planar_core::{build_wheel, Embedding};
use scheme::{scheme_for_wheel, triangle_scheme, Scheme, Strictness};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    Triangle,
    /// Wheel with n rim vertices (n >= 4); the hub starts interior.
    Wheel(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachmentOp {
    /// Wheel with n rim vertices glued over k site vertices at position `at`.
    Wheel { n: usize, k: usize, at: usize },
    /// Chord from position `at` to position at+2, covering at+1.
    Edge { at: usize },
    /// One new vertex fanned over k site vertices at position `at`.
    Vertex { k: usize, at: usize },
    /// Arc of len−1 new vertices over the vertex at position at+1.
    Bogen { len: usize, at: usize },
}

/// A seeded sequence of attachments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionScript {
    pub seed: Seed,
    pub ops: Vec<AttachmentOp>,
}

/// A parsed script file: either a construction or a composition of two other
/// script files at a cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Script {
    Build(ConstructionScript),
    Compose { shape: CutShape, left: String, right: String },
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Triangle => write!(f, "seed triangle"),
            Seed::Wheel(n) => write!(f, "seed wheel {n}"),
        }
    }
}

impl fmt::Display for AttachmentOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AttachmentOp::Wheel { n, k, at } => write!(f, "attach wheel n={n} k={k} at={at}"),
            AttachmentOp::Edge { at } => write!(f, "attach edge at={at}"),
            AttachmentOp::Vertex { k, at } => write!(f, "attach vertex k={k} at={at}"),
            AttachmentOp::Bogen { len, at } => write!(f, "attach bogen len={len} at={at}"),
        }
    }
}

impl fmt::Display for ConstructionScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.seed)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

fn perr(line: usize, msg: impl Into<String>) -> BuilderError {
    BuilderError::Parse { line, msg: msg.into() }
}

/// Parse `key=value` tokens against an expected key list, all values usize.
fn parse_kv(line: usize, toks: &[&str], keys: &[&str]) -> Result<Vec<usize>> {
    let mut vals: Vec<Option<usize>> = vec![None; keys.len()];
    for t in toks {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected key=value, got `{t}`")))?;
        let i = keys
            .iter()
            .position(|&kk| kk == k)
            .ok_or_else(|| perr(line, format!("unknown key `{k}` (expected {})", keys.join(", "))))?;
        if vals[i].is_some() {
            return Err(perr(line, format!("duplicate key `{k}`")));
        }
        vals[i] =
            Some(v.parse().map_err(|_| perr(line, format!("`{k}` needs a number, got `{v}`")))?);
    }
    keys.iter()
        .zip(vals)
        .map(|(k, v)| v.ok_or_else(|| perr(line, format!("missing key `{k}`"))))
        .collect()
}

pub fn parse_script(text: &str) -> Result<Script> {
    let mut seed: Option<Seed> = None;
    let mut ops: Vec<AttachmentOp> = Vec::new();
    let mut compose: Option<(CutShape, String, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let lno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if compose.is_some() {
            return Err(perr(lno, "a compose script has exactly one line"));
        }
        match toks[0] {
            "seed" => {
                if seed.is_some() {
                    return Err(perr(lno, "second seed"));
                }
                seed = Some(match toks.get(1) {
                    Some(&"triangle") if toks.len() == 2 => Seed::Triangle,
                    Some(&"wheel") if toks.len() == 3 => {
                        let n = toks[2]
                            .parse()
                            .map_err(|_| perr(lno, format!("bad wheel size `{}`", toks[2])))?;
                        Seed::Wheel(n)
                    }
                    _ => return Err(perr(lno, "expected `seed triangle` or `seed wheel <n>`")),
                });
            }
            "attach" => {
                if seed.is_none() {
                    return Err(perr(lno, "attach before seed"));
                }
                let op = match toks.get(1) {
                    Some(&"wheel") => {
                        let v = parse_kv(lno, &toks[2..], &["n", "k", "at"])?;
                        AttachmentOp::Wheel { n: v[0], k: v[1], at: v[2] }
                    }
                    Some(&"edge") => {
                        let v = parse_kv(lno, &toks[2..], &["at"])?;
                        AttachmentOp::Edge { at: v[0] }
                    }
                    Some(&"vertex") => {
                        let v = parse_kv(lno, &toks[2..], &["k", "at"])?;
                        AttachmentOp::Vertex { k: v[0], at: v[1] }
                    }
                    Some(&"bogen") => {
                        let v = parse_kv(lno, &toks[2..], &["len", "at"])?;
                        AttachmentOp::Bogen { len: v[0], at: v[1] }
                    }
                    _ => return Err(perr(lno, "expected wheel, edge, vertex or bogen")),
                };
                ops.push(op);
            }
            "compose" => {
                if seed.is_some() {
                    return Err(perr(lno, "compose cannot follow a seed"));
                }
                if toks.get(1) != Some(&"cut") {
                    return Err(perr(lno, "expected `compose cut …`"));
                }
                let mut shape: Option<CutShape> = None;
                let mut left: Option<String> = None;
                let mut right: Option<String> = None;
                for t in &toks[2..] {
                    let (k, v) = t
                        .split_once('=')
                        .ok_or_else(|| perr(lno, format!("expected key=value, got `{t}`")))?;
                    match k {
                        "shared" | "beispiel" => {
                            if shape.is_some() {
                                return Err(perr(lno, "cut shape given twice"));
                            }
                            shape = Some(match (k, v) {
                                ("shared", "1") | ("beispiel", "1") => CutShape::SharedVertex,
                                ("shared", "2") | ("beispiel", "2") => CutShape::SharedEdge,
                                ("beispiel", "3") => CutShape::BridgePair,
                                ("beispiel", "4") => CutShape::BridgeTriple,
                                _ => {
                                    return Err(perr(
                                        lno,
                                        format!("unknown cut shape `{k}={v}`"),
                                    ))
                                }
                            });
                        }
                        "left" => left = Some(v.to_string()),
                        "right" => right = Some(v.to_string()),
                        _ => return Err(perr(lno, format!("unknown key `{k}`"))),
                    }
                }
                let shape = shape.ok_or_else(|| perr(lno, "missing cut shape"))?;
                let left = left.ok_or_else(|| perr(lno, "missing left="))?;
                let right = right.ok_or_else(|| perr(lno, "missing right="))?;
                compose = Some((shape, left, right));
            }
            other => return Err(perr(lno, format!("unknown directive `{other}`"))),
        }
    }
    match (seed, compose) {
        (Some(seed), None) => Ok(Script::Build(ConstructionScript { seed, ops })),
        (None, Some((shape, left, right))) => Ok(Script::Compose { shape, left, right }),
        (None, None) => Err(perr(0, "empty script")),
        (Some(_), Some(_)) => unreachable!("guarded above"),
    }
}

// ---------------------------------------------------------------------------
// static validation
// ---------------------------------------------------------------------------

/// Boundary bookkeeping for the dry run: vertices fanned on or started as an
/// arc keep free color choices and may never be covered afterwards.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Tag {
    Plain,
    Permanent,
}

fn step_tags(tags: &mut Vec<Tag>, op: &AttachmentOp) -> Result<()> {
    let gamma = tags.len();
    let invalid = |msg: String| Err(BuilderError::InvalidAttachment(msg));
    let check_covered = |tags: &[Tag], lo: usize, hi: usize| -> Result<()> {
        for (i, t) in tags[lo..hi].iter().enumerate() {
            if *t == Tag::Permanent {
                return Err(BuilderError::InvalidAttachment(format!(
                    "position {} keeps a free color choice and cannot be covered",
                    lo + i + 1
                )));
            }
        }
        Ok(())
    };
    match *op {
        AttachmentOp::Wheel { n, k, at } => {
            if n < 3 || k < 3 || k > n {
                return invalid(format!("wheel needs 3 <= k <= n, got k={k}, n={n}"));
            }
            if at < 2 || at + k - 1 > gamma {
                return invalid(format!("wheel site {at}..{} off the boundary", at + k - 1));
            }
            check_covered(tags, at, at + k - 2)?;
            let m = n - k + 2;
            tags.splice(at..at + k - 2, std::iter::repeat(Tag::Plain).take(m - 2));
        }
        AttachmentOp::Edge { at } => {
            if gamma < 4 {
                return invalid("chord needs boundary length at least 4".into());
            }
            if at < 2 || at > gamma - 1 {
                return invalid(format!("chord position {at} out of range"));
            }
            check_covered(tags, at, at + 1)?;
            tags.remove(at);
        }
        AttachmentOp::Vertex { k, at } => {
            if k < 3 {
                return invalid("fanned vertex needs k >= 3".into());
            }
            if at < 2 || at + k - 1 > gamma {
                return invalid(format!("vertex site {at}..{} off the boundary", at + k - 1));
            }
            check_covered(tags, at, at + k - 2)?;
            tags.splice(at..at + k - 2, std::iter::once(Tag::Permanent));
        }
        AttachmentOp::Bogen { len, at } => {
            if len < 2 {
                return invalid("arc needs length at least 2".into());
            }
            if at < 2 || at + 2 > gamma {
                return invalid(format!("arc window {at}..{} off the boundary", at + 2));
            }
            check_covered(tags, at, at + 1)?;
            tags.splice(at..at + 1, std::iter::repeat(Tag::Permanent).take(len - 1));
        }
    }
    Ok(())
}

/// Check a script's positions without touching a graph: every index must fit
/// the boundary it will meet, and no operation may cover a vertex that an
/// earlier vertex fan or arc left with a free color choice.
pub fn validate_static(script: &ConstructionScript) -> Result<()> {
    let mut tags: Vec<Tag> = match script.seed {
        Seed::Triangle => vec![Tag::Plain; 3],
        Seed::Wheel(n) => {
            if n < 4 {
                return Err(BuilderError::InvalidAttachment(format!(
                    "seed wheel needs n >= 4, got {n}"
                )));
            }
            vec![Tag::Plain; n]
        }
    };
    for (i, op) in script.ops.iter().enumerate() {
        step_tags(&mut tags, op).map_err(|e| BuilderError::Step {
            index: i + 1,
            op: op.to_string(),
            source: Box::new(e),
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

/// What the replay engine re-checks after each step.
#[derive(Debug, Clone)]
pub struct Config {
    /// Cross-check every scheme word against the exhaustive coloring oracle.
    pub check_oracle: bool,
    /// Skip the oracle beyond this vertex count (it enumerates 4^(n−2)
    /// colorings in the worst case).
    pub oracle_max_vertices: usize,
    /// Run the block-decomposition validator on standard schemes.
    pub check_blocks: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { check_oracle: true, oracle_max_vertices: 14, check_blocks: true }
    }
}

/// One line of replay history.
#[derive(Debug, Clone)]
pub struct StepLog {
    pub label: String,
    pub gamma: usize,
    pub vertices: usize,
    pub count: u128,
    /// Whether the scheme still satisfies the strict structural shape
    /// (single-color cells away from the end, doubling column lengths).
    pub standard: bool,
}

#[derive(Debug)]
pub struct BuildResult {
    pub graph: Embedding,
    pub scheme: Scheme,
    pub log: Vec<StepLog>,
}

pub(crate) fn seed_state(seed: &Seed) -> Result<(Embedding, Scheme)> {
    match *seed {
        Seed::Triangle => {
            let g = Embedding::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]], (0, 1))?;
            Ok((g, triangle_scheme([0, 1, 2], 3)))
        }
        Seed::Wheel(n) => Ok((build_wheel(n)?, scheme_for_wheel(n)?)),
    }
}

/// Apply one attachment operation to a graph/scheme pair.
pub fn apply_op(g: &Embedding, s: &Scheme, op: &AttachmentOp) -> Result<(Embedding, Scheme)> {
    match *op {
        AttachmentOp::Wheel { n, k, at } => attach_wheel(g, s, n, k, at),
        AttachmentOp::Edge { at } => attach_edge(g, s, at),
        AttachmentOp::Vertex { k, at } => attach_vertex(g, s, k, at),
        AttachmentOp::Bogen { len, at } => attach_bogen(g, s, len, at),
    }
}

fn gamma_after(gamma: usize, op: &AttachmentOp) -> usize {
    match *op {
        AttachmentOp::Wheel { n, k, .. } => gamma + (n - k + 2) - k,
        AttachmentOp::Edge { .. } => gamma - 1,
        AttachmentOp::Vertex { k, .. } => gamma - k + 3,
        AttachmentOp::Bogen { len, .. } => gamma + len - 2,
    }
}

/// Full re-validation of a state: embedding invariants, scheme alignment and
/// structure, the counting bound, optionally blocks and the oracle.
fn check_state(g: &Embedding, s: &Scheme, cfg: &Config) -> Result<bool> {
    g.validate_fast_maximal()?;
    if !g.interior_vertices().is_empty() && !g.is_i_graph() {
        return Err(BuilderError::Internal(
            "graph with interior vertices lost the interior-triangulation property".into(),
        ));
    }
    check_alignment(g, s)?;
    let standard = match s.validate_structure(Strictness::Standard) {
        Ok(()) => true,
        Err(_) => {
            s.validate_structure(Strictness::Relaxed)?;
            false
        }
    };
    if s.count_guaranteed() < lower_bound(s.gamma()) {
        return Err(BuilderError::Internal(format!(
            "count {} below bound {}",
            s.count_guaranteed(),
            lower_bound(s.gamma())
        )));
    }
    if standard && cfg.check_blocks {
        blocks::validate_fs2(s)?;
    }
    if cfg.check_oracle && g.n_vertices() <= cfg.oracle_max_vertices {
        for word in s.enumerate_all() {
            if !extends(g, &word)? {
                return Err(BuilderError::Unsound { word });
            }
        }
    }
    Ok(standard)
}

/// Replay a construction script, validating the state after the seed and
/// after every attachment.
pub fn run_script(script: &ConstructionScript, cfg: &Config) -> Result<BuildResult> {
    validate_static(script)?;
    let (mut g, mut s) = seed_state(&script.seed)?;
    let mut log = Vec::new();
    let standard = check_state(&g, &s, cfg)?;
    log.push(StepLog {
        label: script.seed.to_string(),
        gamma: g.gamma(),
        vertices: g.n_vertices(),
        count: s.count_guaranteed(),
        standard,
    });
    for (i, op) in script.ops.iter().enumerate() {
        let wrap = |e: BuilderError| BuilderError::Step {
            index: i + 1,
            op: op.to_string(),
            source: Box::new(e),
        };
        let expected = gamma_after(g.gamma(), op);
        let (g2, s2) = apply_op(&g, &s, op).map_err(wrap)?;
        if g2.gamma() != expected {
            return Err(wrap(BuilderError::Internal(format!(
                "boundary length {} after the step, arithmetic says {expected}",
                g2.gamma()
            ))));
        }
        let standard = check_state(&g2, &s2, cfg).map_err(wrap)?;
        log.push(StepLog {
            label: op.to_string(),
            gamma: g2.gamma(),
            vertices: g2.n_vertices(),
            count: s2.count_guaranteed(),
            standard,
        });
        g = g2;
        s = s2;
    }
    Ok(BuildResult { graph: g, scheme: s, log })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let text = "# demo\nseed wheel 5\nattach wheel n=5 k=3 at=3\nattach edge at=4\n\
                    attach vertex k=3 at=2\nattach bogen len=4 at=2\n";
        let script = match parse_script(text).unwrap() {
            Script::Build(s) => s,
            _ => panic!("expected a construction"),
        };
        assert_eq!(script.seed, Seed::Wheel(5));
        assert_eq!(script.ops.len(), 4);
        let printed = script.to_string();
        let again = match parse_script(&printed).unwrap() {
            Script::Build(s) => s,
            _ => unreachable!(),
        };
        assert_eq!(script, again);
    }

    #[test]
    fn parse_compose_line() {
        let s = parse_script("compose cut shared=2 left=a.fsk right=b.fsk").unwrap();
        assert_eq!(
            s,
            Script::Compose {
                shape: CutShape::SharedEdge,
                left: "a.fsk".into(),
                right: "b.fsk".into()
            }
        );
        let s = parse_script("compose cut beispiel=4 left=x right=y").unwrap();
        assert!(matches!(s, Script::Compose { shape: CutShape::BridgeTriple, .. }));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_script("seed wheel 5\nattach edge\n").unwrap_err();
        match err {
            BuilderError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
        assert!(parse_script("").is_err());
        assert!(parse_script("attach edge at=2").is_err());
        assert!(parse_script("seed wheel 5\nseed wheel 6").is_err());
        assert!(parse_script("seed wheel 5\ncompose cut shared=1 left=a right=b").is_err());
        assert!(parse_script("seed wheel 5\nattach wheel n=5 k=3 at=3 k=4").is_err());
        assert!(parse_script("seed wheel 5\nattach wheel n=5 at=3").is_err());
    }

    #[test]
    fn static_validation_tracks_permanent_vertices() {
        // Fanning a vertex leaves it with a free color choice; covering it
        // afterwards must be rejected before any graph work happens.
        // The fanned vertex sits at position 4; a chord at position 3 would
        // cover it.
        let script = ConstructionScript {
            seed: Seed::Wheel(6),
            ops: vec![
                AttachmentOp::Vertex { k: 3, at: 3 },
                AttachmentOp::Edge { at: 3 },
            ],
        };
        let err = validate_static(&script).unwrap_err();
        assert!(matches!(err, BuilderError::Step { index: 2, .. }), "got {err}");

        // Covering it with a wheel is just as illegal.
        let script = ConstructionScript {
            seed: Seed::Wheel(6),
            ops: vec![
                AttachmentOp::Vertex { k: 3, at: 3 },
                AttachmentOp::Wheel { n: 5, k: 3, at: 3 },
            ],
        };
        assert!(validate_static(&script).is_err());

        // Using it as an uncovered site endpoint stays legal.
        let script = ConstructionScript {
            seed: Seed::Wheel(6),
            ops: vec![
                AttachmentOp::Vertex { k: 3, at: 3 },
                AttachmentOp::Edge { at: 4 },
            ],
        };
        validate_static(&script).unwrap();
    }

    #[test]
    fn static_validation_checks_ranges() {
        let bad = |ops: Vec<AttachmentOp>| {
            validate_static(&ConstructionScript { seed: Seed::Wheel(5), ops }).unwrap_err()
        };
        bad(vec![AttachmentOp::Edge { at: 1 }]);
        bad(vec![AttachmentOp::Edge { at: 5 }]);
        bad(vec![AttachmentOp::Wheel { n: 5, k: 3, at: 4 }]);
        bad(vec![AttachmentOp::Wheel { n: 4, k: 5, at: 2 }]);
        bad(vec![AttachmentOp::Vertex { k: 2, at: 2 }]);
        bad(vec![AttachmentOp::Bogen { len: 1, at: 2 }]);
        bad(vec![AttachmentOp::Bogen { len: 3, at: 4 }]);
    }

    #[test]
    fn run_script_replays_and_logs() {
        let script = ConstructionScript {
            seed: Seed::Wheel(5),
            ops: vec![
                AttachmentOp::Wheel { n: 5, k: 3, at: 3 },
                AttachmentOp::Edge { at: 4 },
            ],
        };
        let res = run_script(&script, &Config::default()).unwrap();
        assert_eq!(res.log.len(), 3);
        assert_eq!(res.log[0].gamma, 5);
        assert_eq!(res.log[1].gamma, 6);
        assert_eq!(res.log[2].gamma, 5);
        assert_eq!(res.log[2].count, res.scheme.count_guaranteed());
        assert!(res.log.iter().all(|l| l.standard));
        assert_eq!(res.graph.gamma(), 5);
    }

    #[test]
    fn run_script_accepts_triangle_seed() {
        let script = ConstructionScript { seed: Seed::Triangle, ops: vec![] };
        let res = run_script(&script, &Config::default()).unwrap();
        assert_eq!(res.graph.gamma(), 3);
        assert_eq!(res.scheme.count_guaranteed(), 1);
    }

    #[test]
    fn run_script_reports_failing_step() {
        // Statically fine: the wheel covers only position 3, which is plain.
        // At runtime the wheel site runs over the fanned vertex's two-color
        // column, which the calculus cannot rewrite.
        let script = ConstructionScript {
            seed: Seed::Wheel(5),
            ops: vec![
                AttachmentOp::Vertex { k: 3, at: 3 },
                AttachmentOp::Wheel { n: 4, k: 3, at: 2 },
            ],
        };
        validate_static(&script).unwrap();
        let err = run_script(&script, &Config::default()).unwrap_err();
        match err {
            BuilderError::Step { index, source, .. } => {
                assert_eq!(index, 2);
                assert!(matches!(*source, BuilderError::UnsupportedSite(_)), "got {source}");
            }
            other => panic!("unexpected error {other}"),
        }
    }
}
