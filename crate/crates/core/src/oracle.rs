//! Exact enumeration of constituent-code CWEFs, independent of the closed
//! forms in [`crate::cwef`].
//!
//! Both routes count every input of length `N` and weight `w` whose encoding
//! from the zero state ends in the zero state, with no termination tail, and
//! apply the puncturing column active at each step.

use itertools::Itertools;

use crate::cwef::Cwef;
use crate::encoder::{EncoderState, RscCode};
use crate::pccc::binomial;
use crate::puncture::PuncturingPattern;
use crate::{Error, Result};

pub const MAX_DP_WEIGHT: u32 = 6;
pub const MAX_DP_DISTANCE: u32 = 512;
pub const MAX_BRUTE_FORCE_INPUTS: u128 = 10_000_000;

/// Enumerators produced by [`exact_cwef_dp`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpEnumerators {
    /// `cwefs[w]` for `w = 0 … w_max`.
    pub cwefs: Vec<Cwef>,
    /// Whether any path was discarded for exceeding `d_max`.
    pub pruned: bool,
}

impl DpEnumerators {
    pub fn weight(&self, w: u32) -> &Cwef {
        &self.cwefs[w as usize]
    }
}

/// Dense per-step table indexed by `(state, w, u, z)` with `u <= w` and
/// `u + z <= d_max`.
struct DpTable {
    w_dim: usize,
    z_dim: usize,
    per_state: usize,
    counts: Vec<u128>,
}

impl DpTable {
    fn new(states: usize, w_max: u32, d_max: u32) -> Self {
        let w_dim = w_max as usize + 1;
        let z_dim = d_max as usize + 1;
        let per_state = w_dim * w_dim * z_dim;
        Self {
            w_dim,
            z_dim,
            per_state,
            counts: vec![0; states * per_state],
        }
    }

    #[inline]
    fn index(&self, state: usize, w: usize, u: usize, z: usize) -> usize {
        state * self.per_state + (w * self.w_dim + u) * self.z_dim + z
    }

    fn clear(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = 0);
    }
}

/// Forward trellis dynamic program. Returns exact CWEFs for every input
/// weight `0 … w_max`, restricted to codewords with `u + z <= d_max`.
pub fn exact_cwef_dp(
    code: &RscCode,
    pattern: &PuncturingPattern,
    n: usize,
    w_max: u32,
    d_max: u32,
) -> Result<DpEnumerators> {
    if w_max > MAX_DP_WEIGHT {
        return Err(Error::Limit(format!(
            "w_max {w_max} exceeds {MAX_DP_WEIGHT}"
        )));
    }
    if d_max > MAX_DP_DISTANCE {
        return Err(Error::Limit(format!(
            "d_max {d_max} exceeds {MAX_DP_DISTANCE}"
        )));
    }
    let states = code.num_states();
    let mut cur = DpTable::new(states, w_max, d_max);
    let mut next = DpTable::new(states, w_max, d_max);
    let start = cur.index(0, 0, 0, 0);
    cur.counts[start] = 1;
    let mut pruned = false;

    // transitions[s][x] = (next state, systematic bit, parity bit)
    let transitions: Vec<[(usize, u8, u8); 2]> = (0..states)
        .map(|s| {
            [0u8, 1].map(|x| {
                let (ns, sys, par) = code.step(EncoderState(s as u32), x);
                (ns.0 as usize, sys, par)
            })
        })
        .collect();
    let (w_dim, z_dim) = (cur.w_dim, cur.z_dim);

    let mut active = vec![false; states];
    active[0] = true;
    let mut next_active = vec![false; states];
    for step in 0..n {
        let keep_u = pattern.systematic().at_step(step);
        let keep_z = pattern.parity().at_step(step);
        // no weight can exceed the number of steps taken so far
        let z_reach = (step + 1).min(z_dim);
        next.clear();
        next_active.iter_mut().for_each(|a| *a = false);
        for (s, trans) in transitions.iter().enumerate() {
            if !active[s] {
                continue;
            }
            let base = s * cur.per_state;
            let block = &cur.counts[base..base + cur.per_state];
            for w in 0..w_dim.min(step + 1) {
                for u in 0..=w {
                    let row = (w * w_dim + u) * z_dim;
                    for z in 0..z_reach.min(z_dim.saturating_sub(u)) {
                        let c = block[row + z];
                        if c == 0 {
                            continue;
                        }
                        for (x, &(ns, sys, par)) in trans.iter().enumerate() {
                            let nw = w + x;
                            if nw >= w_dim {
                                continue;
                            }
                            let nu = u + usize::from(sys == 1 && keep_u);
                            let nz = z + usize::from(par == 1 && keep_z);
                            if nu + nz >= z_dim {
                                pruned = true;
                                continue;
                            }
                            let idx = next.index(ns, nw, nu, nz);
                            let slot = &mut next.counts[idx];
                            *slot = slot
                                .checked_add(c)
                                .ok_or(Error::Overflow("trellis path count"))?;
                            next_active[ns] = true;
                        }
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        std::mem::swap(&mut active, &mut next_active);
    }

    let mut cwefs: Vec<Cwef> = (0..=w_max).map(|w| Cwef::new(w, n)).collect();
    for (w, cwef) in cwefs.iter_mut().enumerate() {
        for u in 0..=w {
            for z in 0..z_dim.saturating_sub(u) {
                let c = cur.counts[cur.index(0, w, u, z)];
                cwef.add(u as u32, z as u32, c)?;
            }
        }
    }
    Ok(DpEnumerators { cwefs, pruned })
}

/// Encodes every weight-`w` input of length `n` explicitly. Refuses when
/// there are more than [`MAX_BRUTE_FORCE_INPUTS`] of them.
///
/// For `w = 2` each counted path is also checked to stay away from the zero
/// state between its two ones.
pub fn brute_force_cwef(
    code: &RscCode,
    pattern: &PuncturingPattern,
    n: usize,
    w: u32,
) -> Result<Cwef> {
    let inputs = binomial(n, w as usize).unwrap_or(u128::MAX);
    if inputs > MAX_BRUTE_FORCE_INPUTS {
        return Err(Error::Limit(format!(
            "C({n}, {w}) = {inputs} inputs exceeds the brute-force cap {MAX_BRUTE_FORCE_INPUTS}"
        )));
    }
    let mut cwef = Cwef::new(w, n);
    let mut input = vec![0u8; n];
    for ones in (0..n).combinations(w as usize) {
        input.iter_mut().for_each(|b| *b = 0);
        for &i in &ones {
            input[i] = 1;
        }
        let mut state = EncoderState::ZERO;
        let (mut u, mut z) = (0u32, 0u32);
        let mut double_excursion = false;
        for (step, &bit) in input.iter().enumerate() {
            let (next, sys, par) = code.step(state, bit);
            u += u32::from(sys == 1 && pattern.systematic().at_step(step));
            z += u32::from(par == 1 && pattern.parity().at_step(step));
            if w == 2 && next == EncoderState::ZERO && step > ones[0] && step < ones[1] {
                double_excursion = true;
            }
            state = next;
        }
        if state != EncoderState::ZERO {
            continue;
        }
        if double_excursion {
            return Err(Error::Domain(format!(
                "weight-2 input {ones:?} remerged before its second one under {code}"
            )));
        }
        cwef.add(u, z, 1)?;
    }
    Ok(cwef)
}
