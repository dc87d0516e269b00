//! Seeded random construction scripts for stress testing.
//!
//! Every emitted script replays cleanly: candidate operations are vetted by
//! actually applying them to a live graph/scheme pair during generation, so a
//! positional clash (an already-present chord, say) just discards the
//! candidate.  Wheel and chord attachments keep the scheme in its strict
//! standard shape, which makes the certified count exactly 2^(γ−3) at every
//! step — the strongest property the stress tests can pin down.

use crate::script::{seed_state, AttachmentOp, ConstructionScript, Seed};
use crate::apply_op;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic script for a seed value; the result never exceeds
/// `max_vertices` vertices.
pub fn random_script(seed: u64, max_vertices: usize) -> ConstructionScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wheel_n = rng.gen_range(4..=7);
    let seed_spec = Seed::Wheel(wheel_n);
    let (mut g, mut s) = seed_state(&seed_spec).expect("wheel seeds are valid");
    let target_ops = rng.gen_range(1..=4);
    let mut ops = Vec::new();
    let mut tries = 0;
    while ops.len() < target_ops && tries < 60 {
        tries += 1;
        let gamma = g.gamma();
        let op = if rng.gen_bool(0.6) {
            // Wheel over k site vertices: adds a hub and m−2 free rim
            // vertices, so m−1 vertices in total.
            let kmax = (gamma - 1).min(5);
            if kmax < 3 || g.n_vertices() + 2 > max_vertices {
                continue;
            }
            let room = (max_vertices - g.n_vertices()).min(4);
            let k = rng.gen_range(3..=kmax);
            let m = rng.gen_range(3..=(room + 1).min(5));
            let at = rng.gen_range(2..=gamma - k + 1);
            AttachmentOp::Wheel { n: m + k - 2, k, at }
        } else {
            if gamma < 4 {
                continue;
            }
            AttachmentOp::Edge { at: rng.gen_range(2..=gamma - 1) }
        };
        if let Ok((g2, s2)) = apply_op(&g, &s, &op) {
            g = g2;
            s = s2;
            ops.push(op);
        }
    }
    ConstructionScript { seed: seed_spec, ops }
}
