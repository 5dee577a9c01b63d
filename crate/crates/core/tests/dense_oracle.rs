//! Sparse Gram matrices against a dense reference built from explicit ladder matrices, plus
//! values frozen from an external dense computation.

use num_complex::Complex64;
use orbitdim_core::orbit::{gram_ket, gram_ketbra, gram_mixed, orbit_dimension, PictureKind};
use orbitdim_core::{outer, GroupKind, Occupation, SparseKet};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Dense matrices on all Fock states with at most `cutoff` photons.
struct Dense {
    states: Vec<Vec<u32>>,
    n: usize,
}

impl Dense {
    fn new(m: usize, cutoff: u32) -> Self {
        let mut states = vec![vec![]];
        for _ in 0..m {
            states = states
                .into_iter()
                .flat_map(|s: Vec<u32>| {
                    (0..=cutoff).map(move |k| {
                        let mut t = s.clone();
                        t.push(k);
                        t
                    })
                })
                .filter(|s| s.iter().sum::<u32>() <= cutoff)
                .collect();
        }
        states.sort();
        let n = states.len();
        Self { states, n }
    }

    fn index(&self, s: &[u32]) -> Option<usize> {
        self.states.iter().position(|t| t == s)
    }

    fn annihilate(&self, k: usize) -> Vec<C> {
        let mut a = vec![c(0.0, 0.0); self.n * self.n];
        for (j, s) in self.states.iter().enumerate() {
            if s[k] > 0 {
                let mut t = s.clone();
                t[k] -= 1;
                let i = self.index(&t).unwrap();
                a[i * self.n + j] = c(f64::from(s[k]).sqrt(), 0.0);
            }
        }
        a
    }

    fn mul(&self, a: &[C], b: &[C]) -> Vec<C> {
        let n = self.n;
        let mut out = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        out
    }

    fn dag(&self, a: &[C]) -> Vec<C> {
        let n = self.n;
        let mut out = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = a[i * n + j].conj();
            }
        }
        out
    }

    fn lin(&self, x: C, a: &[C], y: C, b: &[C]) -> Vec<C> {
        a.iter().zip(b).map(|(p, q)| x * p + y * q).collect()
    }

    fn identity(&self) -> Vec<C> {
        let mut out = vec![c(0.0, 0.0); self.n * self.n];
        for i in 0..self.n {
            out[i * self.n + i] = c(1.0, 0.0);
        }
        out
    }

    /// Lie basis in the library's order: e, E, N, then q, p, 1, then r, R, s, S.
    fn generators(&self, group: GroupKind, m: usize) -> Vec<Vec<C>> {
        let a: Vec<Vec<C>> = (0..m).map(|k| self.annihilate(k)).collect();
        let ad: Vec<Vec<C>> = a.iter().map(|x| self.dag(x)).collect();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|k| (k + 1..m).map(move |l| (k, l))).collect();
        let h = c(0.5, 0.0);
        let ih = c(0.0, 0.5);
        let mut g = Vec::new();
        for &(k, l) in &pairs {
            g.push(self.lin(h, &self.mul(&ad[k], &a[l]), h, &self.mul(&ad[l], &a[k])));
        }
        for &(k, l) in &pairs {
            g.push(self.lin(ih, &self.mul(&ad[k], &a[l]), -ih, &self.mul(&ad[l], &a[k])));
        }
        for k in 0..m {
            g.push(self.mul(&ad[k], &a[k]));
        }
        if matches!(group, GroupKind::Dplo | GroupKind::Go) {
            let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let is = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
            for k in 0..m {
                g.push(self.lin(s, &ad[k], s, &a[k]));
            }
            for k in 0..m {
                g.push(self.lin(is, &ad[k], -is, &a[k]));
            }
            g.push(self.identity());
        }
        if matches!(group, GroupKind::Alo | GroupKind::Go) {
            for &(k, l) in &pairs {
                g.push(self.lin(h, &self.mul(&ad[k], &ad[l]), h, &self.mul(&a[k], &a[l])));
            }
            for &(k, l) in &pairs {
                g.push(self.lin(ih, &self.mul(&ad[k], &ad[l]), -ih, &self.mul(&a[k], &a[l])));
            }
            for k in 0..m {
                g.push(self.lin(h, &self.mul(&ad[k], &ad[k]), h, &self.mul(&a[k], &a[k])));
            }
            for k in 0..m {
                g.push(self.lin(ih, &self.mul(&ad[k], &ad[k]), -ih, &self.mul(&a[k], &a[k])));
            }
        }
        g
    }

    fn vector(&self, ket: &SparseKet) -> Vec<C> {
        let mut v = vec![c(0.0, 0.0); self.n];
        for (occ, amp) in ket.iter() {
            v[self.index(occ.counts()).unwrap()] = *amp;
        }
        v
    }

    fn apply(&self, a: &[C], v: &[C]) -> Vec<C> {
        (0..self.n).map(|i| (0..self.n).map(|j| a[i * self.n + j] * v[j]).sum()).collect()
    }
}

fn re_inner(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Dense ket and ketbra Gram matrices, row-major.
fn dense_grams(group: GroupKind, ket: &SparseKet) -> (Vec<f64>, Vec<f64>) {
    let m = ket.modes();
    let dense = Dense::new(m, ket.max_total() + 2);
    let v = dense.vector(ket);
    let tangents: Vec<Vec<C>> = dense.generators(group, m).iter().map(|g| dense.apply(g, &v)).collect();
    let d = tangents.len();
    let mu: Vec<f64> = tangents.iter().map(|t| re_inner(&v, t)).collect();
    let mut gk = vec![0.0; d * d];
    let mut gb = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            gk[i * d + j] = re_inner(&tangents[i], &tangents[j]);
            gb[i * d + j] = 2.0 * (gk[i * d + j] - mu[i] * mu[j]);
        }
    }
    (gk, gb)
}

fn ket(m: usize, terms: &[(&[u32], C)]) -> SparseKet {
    SparseKet::from_terms(m, terms.iter().map(|(o, a)| (Occupation::from(*o), *a))).unwrap().normalize().unwrap()
}

fn states() -> Vec<SparseKet> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        ket(1, &[(&[0], c(1.0, 0.0))]),
        ket(1, &[(&[2], c(1.0, 0.0))]),
        ket(1, &[(&[0], c(0.3, 0.1)), (&[1], c(-0.5, 0.7)), (&[3], c(0.2, -0.4))]),
        ket(2, &[(&[1, 0], c(0.6, 0.0)), (&[0, 1], c(0.0, 0.8))]),
        ket(2, &[(&[2, 0], c(s, 0.0)), (&[1, 1], c(0.0, -s))]),
        ket(2, &[(&[3, 0], c(1.0, 0.0)), (&[0, 3], c(1.0, 0.0))]),
        ket(3, &[(&[1, 0, 1], c(1.0, 0.0)), (&[0, 2, 0], c(0.4, 0.9)), (&[0, 0, 0], c(-0.2, 0.0))]),
    ]
}

#[test]
fn sparse_grams_match_dense_reference() {
    for psi in states() {
        for group in GroupKind::ALL {
            let (gk, gb) = dense_grams(group, &psi);
            let ket_gram = gram_ket(group, &psi).unwrap();
            let ketbra_gram = gram_ketbra(group, &psi).unwrap();
            for (idx, (want_k, want_b)) in gk.iter().zip(&gb).enumerate() {
                let (got_k, got_b) = (ket_gram.values()[idx], ketbra_gram.values()[idx]);
                assert!((got_k - want_k).abs() < 1e-12, "{group} ket entry {idx}: {got_k} vs {want_k}");
                assert!((got_b - want_b).abs() < 1e-12, "{group} ketbra entry {idx}: {got_b} vs {want_b}");
            }
        }
    }
}

fn assert_matrix(got: &[f64], want: &[f64]) {
    assert_eq!(got.len(), want.len());
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() < 1e-12, "entry {i}: {g} vs {w}");
    }
}

fn diagonal(diag: &[f64]) -> Vec<f64> {
    let d = diag.len();
    let mut out = vec![0.0; d * d];
    for (i, x) in diag.iter().enumerate() {
        out[i * d + i] = *x;
    }
    out
}

#[test]
fn frozen_single_photon_go() {
    let psi = ket(1, &[(&[1], c(1.0, 0.0))]);
    let mut want = diagonal(&[1.0, 1.5, 1.5, 1.0, 1.5, 1.5]);
    want[3] = 1.0;
    want[3 * 6] = 1.0;
    assert_matrix(gram_ket(GroupKind::Go, &psi).unwrap().values(), &want);
    assert_matrix(gram_ketbra(GroupKind::Go, &psi).unwrap().values(), &diagonal(&[0.0, 3.0, 3.0, 0.0, 3.0, 3.0]));
}

#[test]
fn frozen_even_superposition_go() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = ket(1, &[(&[0], c(1.0, 0.0)), (&[2], c(1.0, 0.0))]);
    let mut want = diagonal(&[2.0, 1.5 + s, 1.5 - s, 1.0, 2.0, 2.0]);
    for (i, j, v) in [(0, 3, 1.0), (0, 4, s), (3, 4, s)] {
        want[i * 6 + j] = v;
        want[j * 6 + i] = v;
    }
    assert_matrix(gram_ket(GroupKind::Go, &psi).unwrap().values(), &want);
    let sq2 = std::f64::consts::SQRT_2;
    assert_matrix(
        gram_ketbra(GroupKind::Go, &psi).unwrap().values(),
        &diagonal(&[2.0, 3.0 + sq2, 3.0 - sq2, 0.0, 3.0, 4.0]),
    );
}

#[test]
fn frozen_dual_rail_plo() {
    let psi = ket(2, &[(&[1, 0], c(0.6, 0.0)), (&[0, 1], c(0.0, 0.8))]);
    let ket_want = [0.25, 0.0, 0.0, 0.0, 0.0, 0.25, -0.24, -0.24, 0.0, -0.24, 0.36, 0.0, 0.0, -0.24, 0.0, 0.64];
    let ketbra_want = [
        0.5, 0.0, 0.0, 0.0, 0.0, 0.0392, -0.1344, 0.1344, 0.0, -0.1344, 0.4608, -0.4608, 0.0, 0.1344, -0.4608, 0.4608,
    ];
    assert_matrix(gram_ket(GroupKind::Plo, &psi).unwrap().values(), &ket_want);
    assert_matrix(gram_ketbra(GroupKind::Plo, &psi).unwrap().values(), &ketbra_want);
    let mixed = gram_mixed(GroupKind::Plo, &outer(&psi).unwrap()).unwrap();
    assert_matrix(mixed.values(), &ketbra_want);
}

#[test]
fn frozen_dimensions() {
    let cases: Vec<(GroupKind, SparseKet, usize, usize)> = vec![
        (GroupKind::Go, ket(2, &[(&[1, 1], c(1.0, 0.0))]), 13, 12),
        (GroupKind::Go, ket(2, &[(&[0, 0], c(1.0, 0.0))]), 11, 10),
        (GroupKind::Plo, ket(3, &[(&[1, 1, 0], c(1.0, 0.0))]), 7, 6),
        (GroupKind::Go, ket(2, &[(&[3, 0], c(1.0, 0.0)), (&[0, 3], c(1.0, 0.0))]), 14, 13),
    ];
    for (group, psi, want_ket, want_ketbra) in cases {
        assert_eq!(orbit_dimension(group, &psi, PictureKind::Ket, None).unwrap().rank, want_ket);
        assert_eq!(orbit_dimension(group, &psi, PictureKind::Ketbra, None).unwrap().rank, want_ketbra);
    }
}
