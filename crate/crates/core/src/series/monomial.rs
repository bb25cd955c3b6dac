use std::fmt;

use smallvec::SmallVec;

use super::Grading;

/// `t^{t2/2} · ∏ t_k^{e_k}`, face exponents kept sorted by index with no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    t2: i32,
    faces: SmallVec<[(u16, u16); 4]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn t_pow2(t2: i32) -> Monomial {
        Monomial { t2, faces: SmallVec::new() }
    }

    pub fn face(k: u16, e: u16) -> Monomial {
        Monomial::one().with_face_exp(k, e)
    }

    /// Build from a doubled t-exponent and (index, exponent) pairs in any order.
    pub fn new(t2: i32, faces: impl IntoIterator<Item = (u16, u16)>) -> Monomial {
        let mut m = Monomial::t_pow2(t2);
        for (k, e) in faces {
            let cur = m.face_exp(k);
            m = m.with_face_exp(k, cur + e);
        }
        m
    }

    pub fn t2(&self) -> i32 {
        self.t2
    }

    pub fn faces(&self) -> &[(u16, u16)] {
        &self.faces
    }

    pub fn face_exp(&self, k: u16) -> u16 {
        match self.faces.binary_search_by_key(&k, |x| x.0) {
            Ok(i) => self.faces[i].1,
            Err(_) => 0,
        }
    }

    pub fn with_t2(&self, t2: i32) -> Monomial {
        Monomial { t2, faces: self.faces.clone() }
    }

    pub fn with_face_exp(&self, k: u16, e: u16) -> Monomial {
        let mut faces = self.faces.clone();
        match faces.binary_search_by_key(&k, |x| x.0) {
            Ok(i) if e == 0 => {
                faces.remove(i);
            }
            Ok(i) => faces[i].1 = e,
            Err(_) if e == 0 => {}
            Err(i) => faces.insert(i, (k, e)),
        }
        Monomial { t2: self.t2, faces }
    }

    /// Number of inner faces, Σ e_k.
    pub fn face_count(&self) -> i64 {
        self.faces.iter().map(|&(_, e)| e as i64).sum()
    }

    /// Σ k·e_k.
    pub fn face_degree_sum(&self) -> i64 {
        self.faces.iter().map(|&(k, e)| k as i64 * e as i64).sum()
    }

    /// Doubled grade under the given grading.
    pub fn grade2(&self, g: Grading) -> i64 {
        g.t_weight(self.t2 as i64) + 2 * self.face_count()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut faces: SmallVec<[(u16, u16); 4]> = SmallVec::with_capacity(self.faces.len() + other.faces.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.faces, &other.faces);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                faces.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                faces.push(b[j]);
                j += 1;
            } else {
                faces.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial { t2: self.t2 + other.t2, faces }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.t2 {
            0 => {}
            2 => parts.push("t".to_string()),
            t2 if t2 % 2 == 0 => parts.push(format!("t^{}", t2 / 2)),
            t2 => parts.push(format!("t^({t2}/2)")),
        }
        for &(k, e) in &self.faces {
            if e == 1 {
                parts.push(format!("t{k}"));
            } else {
                parts.push(format!("t{k}^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}
