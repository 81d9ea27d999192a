use super::rational::Rat;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rat)>;

/// Returns `v - a * p`.
pub fn sub_scaled(v: &[(usize, Rat)], a: &Rat, p: &[(usize, Rat)]) -> SparseVec {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        if j == p.len() || (i < v.len() && v[i].0 < p[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i == v.len() || p[j].0 < v[i].0 {
            out.push((p[j].0, -(a * &p[j].1)));
            j += 1;
        } else {
            let x = &v[i].1 - &(a * &p[j].1);
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn add_scaled_into(acc: &mut SparseVec, a: &Rat, p: &[(usize, Rat)]) {
    let neg = -a;
    *acc = sub_scaled(acc, &neg, p);
}

pub fn scale(v: &[(usize, Rat)], a: &Rat) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, a * x)).collect()
}

pub fn dot(v: &[(usize, Rat)], w: &[(usize, Rat)]) -> Rat {
    let (mut i, mut j) = (0, 0);
    let mut acc = Rat::int(0);
    while i < v.len() && j < w.len() {
        match v[i].0.cmp(&w[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = &acc + &(&v[i].1 * &w[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn get(v: &[(usize, Rat)], idx: usize) -> Rat {
    match v.binary_search_by_key(&idx, |e| e.0) {
        Ok(k) => v[k].1.clone(),
        Err(_) => Rat::int(0),
    }
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn from_entries(mut entries: Vec<(usize, Rat)>) -> SparseVec {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, x) in entries {
        if let Some(last) = out.last_mut() {
            if last.0 == i {
                last.1 = &last.1 + &x;
                continue;
            }
        }
        out.push((i, x));
    }
    out.retain(|e| !e.1.is_zero());
    out
}

pub fn from_dense(v: &[Rat]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &[(usize, Rat)], len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::int(0); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}
