use rayon::prelude::*;
use rug::ops::{NegAssign, Pow};
use rug::{Assign, Float};

use super::{check_kind, coalesce, degree_chunks, DtnSpectrum, TransferState, GUARD_BITS};
use crate::error::{Error, Result};
use crate::highprec::{BesselFamily, BesselOrders, BigReal, Precision};
use crate::profiles::{PiecewiseProfile, ProfileKind};

/// DtN eigenvalues of −Δ + q on B_R for a radial piecewise-constant q (d = 3).
///
/// Works with w = r u, which solves w'' = (c + k(k+1)/r²) w on a piece with
/// value c. The fundamental pairs are r·i_k(√c r), r·k_k(√c r) for c > 0,
/// r·j_k(√−c r), r·y_k(√−c r) for c < 0 and powers of r for c = 0. The
/// regular solution is started on the innermost piece and carried outward
/// with continuous (w, w').
pub fn potential_spectrum(q: &PiecewiseProfile, kmax: usize, prec: Precision) -> Result<DtnSpectrum> {
    check_kind(q, ProfileKind::Potential)?;
    let work = prec.bits() + GUARD_BITS;
    let pieces = coalesce(q, work);
    let chunks = degree_chunks(kmax);
    let solved: Vec<Vec<TransferState>> = chunks
        .par_iter()
        .map(|&(lo, hi)| propagate(&pieces, lo, hi, work))
        .collect();

    let radius = Float::with_val(work, q.radius().as_float());
    let inv_r = Float::with_val(work, radius.recip_ref());
    let mut lambdas = Vec::with_capacity(kmax + 1);
    for (k, st) in solved.into_iter().flatten().enumerate() {
        check_collision(k, &st, prec)?;
        let mut lam = Float::with_val(work, &st.wprime / &st.w);
        lam -= &inv_r;
        lambdas.push(BigReal::with_precision(&lam, prec));
    }
    Ok(DtnSpectrum {
        kind: ProfileKind::Potential,
        radius: BigReal::with_precision(q.radius().as_float(), prec),
        lambdas,
        precision: prec,
    })
}

fn check_collision(k: usize, st: &TransferState, prec: Precision) -> Result<()> {
    // |w| < 2^{-prec/2} |w'|
    let w_exp = st.w.get_exp().map(i64::from).unwrap_or(i64::MIN / 2);
    let dw_exp = st.wprime.get_exp().map(i64::from).unwrap_or(i64::MIN / 2);
    let mut scaled = Float::with_val(64, st.wprime.abs_ref());
    scaled >>= (prec.bits() / 2) as i32;
    if Float::with_val(64, st.w.abs_ref()) < scaled {
        return Err(Error::DirichletCollision { k, w_exp, dw_exp });
    }
    Ok(())
}

/// w-form values of one fundamental pair at both ends of a piece.
struct Ends {
    fa: Float,
    dfa: Float,
    ga: Float,
    dga: Float,
    fb: Float,
    dfb: Float,
    gb: Float,
    dgb: Float,
}

impl Ends {
    fn new(work: u32) -> Self {
        let z = || Float::new(work);
        Ends {
            fa: z(),
            dfa: z(),
            ga: z(),
            dga: z(),
            fb: z(),
            dfb: z(),
            gb: z(),
            dgb: z(),
        }
    }

    /// (w, w') ↦ transfer to the outer end, up to the constant Wronskian factor.
    fn apply(&self, st: &mut TransferState, t1: &mut Float, t2: &mut Float) {
        // w_b  = w (g'_a f_b − f'_a g_b) + w' (f_a g_b − g_a f_b)
        // w'_b = w (g'_a f'_b − f'_a g'_b) + w' (f_a g'_b − g_a f'_b)
        t1.assign(&self.dga * &self.fb);
        *t1 -= Float::with_val(t1.prec(), &self.dfa * &self.gb);
        t2.assign(&self.fa * &self.gb);
        *t2 -= Float::with_val(t2.prec(), &self.ga * &self.fb);
        let new_w = Float::with_val(t1.prec(), &st.w * &*t1) + Float::with_val(t1.prec(), &st.wprime * &*t2);

        t1.assign(&self.dga * &self.dfb);
        *t1 -= Float::with_val(t1.prec(), &self.dfa * &self.dgb);
        t2.assign(&self.fa * &self.dgb);
        *t2 -= Float::with_val(t2.prec(), &self.ga * &self.dfb);
        let new_dw = Float::with_val(t1.prec(), &st.w * &*t1) + Float::with_val(t1.prec(), &st.wprime * &*t2);

        st.w = new_w;
        st.wprime = new_dw;
    }
}

fn family_of(c: &Float) -> BesselFamily {
    if *c > 0 {
        BesselFamily::Modified
    } else {
        BesselFamily::Spherical
    }
}

/// r F_k(x) and its r-derivative (k+1) F_k ± x F_{k+1}, with x = s r.
fn w_form(table: &[Float], k: usize, r: &Float, x: &Float, plus: bool, val: &mut Float, der: &mut Float) {
    val.assign(r * &table[k]);
    der.assign(x * &table[k + 1]);
    if !plus {
        der.neg_assign();
    }
    *der += Float::with_val(der.prec(), &table[k] * (k as u32 + 1));
}

fn propagate(pieces: &[(Float, Float)], lo: usize, hi: usize, work: u32) -> Vec<TransferState> {
    let kmax = hi - 1;
    let mut states: Vec<TransferState> = Vec::with_capacity(hi - lo);
    let mut ta = BesselOrders::new(BesselFamily::Modified);
    let mut tb = BesselOrders::new(BesselFamily::Modified);
    let mut ends = Ends::new(work);
    let mut t1 = Float::new(work);
    let mut t2 = Float::new(work);
    let mut ra = Float::new(work);

    for (p, (rb, c)) in pieces.iter().enumerate() {
        let s = Float::with_val(work, c.abs_ref()).sqrt();
        let family = family_of(c);
        if p == 0 {
            if c.is_zero() {
                // w = (r/r_b)^{k+1}
                for k in lo..hi {
                    let dw = Float::with_val(work, (k + 1) as u32) / rb;
                    states.push(TransferState { w: Float::with_val(work, 1), wprime: dw });
                }
            } else {
                let xb = Float::with_val(work, &s * rb);
                tb.fill(family, &xb, kmax, work);
                let plus = family == BesselFamily::Modified;
                for k in lo..hi {
                    let mut st = TransferState { w: Float::new(work), wprime: Float::new(work) };
                    w_form(&tb.first, k, rb, &xb, plus, &mut st.w, &mut st.wprime);
                    st.renormalize();
                    states.push(st);
                }
            }
            ra.assign(rb);
            continue;
        }

        if c.is_zero() {
            // f = (r/r_a)^{k+1}, g = (r/r_a)^{-k}
            let t = Float::with_val(work, rb / &ra);
            let inv_t = Float::with_val(work, t.recip_ref());
            let inv_ra = Float::with_val(work, ra.recip_ref());
            let mut tk = Float::with_val(work, (&t).pow(lo as u32));
            let mut inv_tk = Float::with_val(work, tk.recip_ref());
            for (i, k) in (lo..hi).enumerate() {
                let kf = k as u32;
                ends.fa.assign(1);
                ends.dfa.assign((kf + 1) as f64);
                ends.dfa *= &inv_ra;
                ends.ga.assign(1);
                ends.dga.assign(-(kf as f64));
                ends.dga *= &inv_ra;
                ends.fb.assign(&tk * &t);
                ends.dfb.assign(&tk * &inv_ra);
                ends.dfb *= kf + 1;
                ends.gb.assign(&inv_tk);
                ends.dgb.assign(&inv_tk * &inv_t);
                ends.dgb *= &inv_ra;
                ends.dgb *= -(kf as i32);
                ends.apply(&mut states[i], &mut t1, &mut t2);
                states[i].renormalize();
                tk *= &t;
                inv_tk *= &inv_t;
            }
        } else {
            let xa = Float::with_val(work, &s * &ra);
            let xb = Float::with_val(work, &s * rb);
            ta.fill(family, &xa, kmax, work);
            tb.fill(family, &xb, kmax, work);
            let fplus = family == BesselFamily::Modified;
            for (i, k) in (lo..hi).enumerate() {
                w_form(&ta.first, k, &ra, &xa, fplus, &mut ends.fa, &mut ends.dfa);
                w_form(&ta.second, k, &ra, &xa, false, &mut ends.ga, &mut ends.dga);
                w_form(&tb.first, k, rb, &xb, fplus, &mut ends.fb, &mut ends.dfb);
                w_form(&tb.second, k, rb, &xb, false, &mut ends.gb, &mut ends.dgb);
                ends.apply(&mut states[i], &mut t1, &mut t2);
                states[i].renormalize();
            }
        }
        ra.assign(rb);
    }
    states
}
