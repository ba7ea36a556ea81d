use super::dist::{Channel, JointPmf, Pmf};
use crate::error::{Error, Result};

/// `-Σ p log2 p` with `0 log 0 = 0`.
pub fn entropy(p: &Pmf) -> f64 {
    let h: f64 = p
        .probs()
        .iter()
        .filter(|&&pi| pi > 0.0)
        .map(|&pi| -pi * pi.log2())
        .sum();
    h.max(0.0)
}

pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("binary entropy argument {q} outside [0, 1]")));
    }
    if q == 0.0 || q == 1.0 {
        return Ok(0.0);
    }
    Ok(-q * q.log2() - (1.0 - q) * (1.0 - q).log2())
}

/// Binary convolution `a(1-b) + b(1-a)`: the crossover of two cascaded
/// binary symmetric channels.
pub fn star(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// `D(p || q)` in bits; `f64::INFINITY` when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(Error::AlphabetMismatch(format!(
            "divergence between alphabets of size {} and {}",
            p.alphabet_size(),
            q.alphabet_size()
        )));
    }
    let mut d = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        d += pi * (pi / qi).log2();
    }
    Ok(d.max(0.0))
}

/// `D(P_joint || P_row ⊗ P_col)`
pub fn mutual_information(j: &JointPmf) -> f64 {
    let rm = j.row_marginal();
    let cm = j.col_marginal();
    let mut total = 0.0;
    for r in 0..j.row_alphabet() {
        let pr = rm.get(r);
        for (c, &p) in j.row(r).iter().enumerate() {
            if p > 0.0 {
                total += p * (p / (pr * cm.get(c))).log2();
            }
        }
    }
    total.max(0.0)
}

/// Joint law of `(U, X)` with `X ~ px` and `U ~ ch(.|X)`. Rows are indexed
/// by `U`, columns by `X`.
pub fn compose(px: &Pmf, ch: &Channel) -> Result<JointPmf> {
    if ch.in_alphabet() != px.alphabet_size() {
        return Err(Error::AlphabetMismatch(format!(
            "channel takes {} inputs, pmf has {} symbols",
            ch.in_alphabet(),
            px.alphabet_size()
        )));
    }
    let (nu, nx) = (ch.out_alphabet(), px.alphabet_size());
    let mut probs = vec![0.0; nu * nx];
    for x in 0..nx {
        for u in 0..nu {
            probs[u * nx + x] = px.get(x) * ch.get(x, u);
        }
    }
    Ok(JointPmf::from_parts_unchecked(nu, nx, probs))
}

/// Joint law of `(U, Y)` under the Markov chain `U - X - Y`, with the rows of
/// `pxy` indexed by `X`. Rows of the result are indexed by `U`.
pub fn push_to_uy(pxy: &JointPmf, ch: &Channel) -> Result<JointPmf> {
    if ch.in_alphabet() != pxy.row_alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "channel takes {} inputs, joint pmf has {} rows",
            ch.in_alphabet(),
            pxy.row_alphabet()
        )));
    }
    let (nu, ny) = (ch.out_alphabet(), pxy.col_alphabet());
    let mut probs = vec![0.0; nu * ny];
    for x in 0..pxy.row_alphabet() {
        let row = pxy.row(x);
        for u in 0..nu {
            let w = ch.get(x, u);
            if w == 0.0 {
                continue;
            }
            for (y, &p) in row.iter().enumerate() {
                probs[u * ny + y] += w * p;
            }
        }
    }
    Ok(JointPmf::from_parts_unchecked(nu, ny, probs))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straight-line summation with compensated accumulation, kept apart
    /// from the library's own loops.
    fn oracle_entropy(ps: &[f64]) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &p in ps {
            if p > 0.0 {
                let term = -p * (p.ln() / std::f64::consts::LN_2) - comp;
                let t = sum + term;
                comp = (t - sum) - term;
                sum = t;
            }
        }
        sum
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Pmf::uniform(2).unwrap()), 1.0);
        assert_eq!(entropy(&Pmf::new(vec![1.0, 0.0]).unwrap()), 0.0);
        let p = Pmf::new(vec![0.11, 0.89]).unwrap();
        let want = oracle_entropy(&[0.11, 0.89]);
        assert!((entropy(&p) - want).abs() < 1e-14);
        assert!((want - 0.499_915_958_164_528_9).abs() < 1e-12);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let want = oracle_entropy(&[0.2, 0.8]);
        assert!((binary_entropy(0.2).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.721_928_094_887_362_3).abs() < 1e-12);
        assert!(matches!(binary_entropy(1.5), Err(Error::Domain(_))));
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn kl_examples() {
        let p = Pmf::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let one = Pmf::new(vec![1.0, 0.0]).unwrap();
        let half = Pmf::uniform(2).unwrap();
        assert_eq!(kl_divergence(&one, &half).unwrap(), 1.0);
        assert!(kl_divergence(&half, &one).unwrap().is_infinite());

        let q = Pmf::new(vec![0.6, 0.4]).unwrap();
        // 0.3 log2(0.5) + 0.7 log2(1.75)
        let want = 0.3 * (0.5f64).ln() / std::f64::consts::LN_2
            + 0.7 * (1.75f64).ln() / std::f64::consts::LN_2;
        assert!((kl_divergence(&p, &q).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.265_148_445_440_322_9).abs() < 1e-12);
        assert!(kl_divergence(&p, &Pmf::uniform(3).unwrap()).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let u = Pmf::uniform(2).unwrap();
        let prod = JointPmf::product(&u, &Pmf::new(vec![0.3, 0.7]).unwrap());
        assert!(mutual_information(&prod).abs() < 1e-15);
        let copy = JointPmf::from_rows(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_eq!(mutual_information(&copy), 1.0);
        let dsbs = JointPmf::dsbs(0.1).unwrap();
        let want = 1.0 - binary_entropy(0.1).unwrap();
        assert!((mutual_information(&dsbs) - want).abs() < 1e-14);
        assert!((want - 0.531_004_406_410_718_5).abs() < 1e-12);
        assert!((mutual_information(&dsbs.transpose()) - want).abs() < 1e-15);
    }

    #[test]
    fn compose_examples() {
        let px = Pmf::new(vec![0.5, 0.5]).unwrap();
        let ch = Channel::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        // rows indexed by U
        let j = compose(&px, &ch).unwrap();
        assert_eq!(j, JointPmf::from_rows(vec![vec![0.45, 0.1], vec![0.05, 0.4]]).unwrap());
        assert_eq!(j.col_marginal(), px);

        let px3 = Pmf::new(vec![0.2, 0.3, 0.5]).unwrap();
        let id = compose(&px3, &Channel::identity(3).unwrap()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(id.get(a, b), if a == b { px3.get(a) } else { 0.0 });
            }
        }
        let r = Pmf::new(vec![0.25, 0.75]).unwrap();
        let c = compose(&px3, &Channel::constant(3, &r).unwrap()).unwrap();
        let want = JointPmf::product(&r, &px3);
        for (a, b) in c.probs().iter().zip(want.probs()) {
            assert!((a - b).abs() < 1e-16);
        }
        assert!(compose(&px, &Channel::identity(3).unwrap()).is_err());
    }

    #[test]
    fn push_to_uy_examples() {
        let dsbs = JointPmf::dsbs(0.1).unwrap();
        assert_eq!(push_to_uy(&dsbs, &Channel::identity(2).unwrap()).unwrap(), dsbs);

        let r = Pmf::new(vec![0.4, 0.6]).unwrap();
        let uy = push_to_uy(&dsbs, &Channel::constant(2, &r).unwrap()).unwrap();
        let want = JointPmf::product(&r, &dsbs.col_marginal());
        for (a, b) in uy.probs().iter().zip(want.probs()) {
            assert!((a - b).abs() < 1e-16);
        }

        let uy = push_to_uy(&dsbs, &Channel::bsc(0.25).unwrap()).unwrap();
        let want = 1.0 - binary_entropy(star(0.25, 0.1)).unwrap();
        assert!((mutual_information(&uy) - want).abs() < 1e-14);
        assert_eq!(uy.col_marginal(), dsbs.col_marginal());
        assert!(push_to_uy(&dsbs, &Channel::identity(3).unwrap()).is_err());
    }
}
