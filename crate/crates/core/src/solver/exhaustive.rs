use super::compile::Compiled;

/// Gray-code walk over all 2^n assignments; first solution found wins.
pub(crate) fn search(c: &Compiled) -> Option<Vec<u8>> {
    let n = c.n;
    // occurrences of each variable: (equation, term)
    let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut zeros: Vec<Vec<u32>> = Vec::with_capacity(c.eqs.len());
    let mut value: Vec<i128> = Vec::with_capacity(c.eqs.len());
    for (i, e) in c.eqs.iter().enumerate() {
        zeros.push(e.terms.iter().map(|(_, vs)| vs.len() as u32).collect());
        value.push(e.constant);
        for (t, (_, vs)) in e.terms.iter().enumerate() {
            for &v in vs {
                occ[v as usize].push((i, t));
            }
        }
    }
    let mut bad = value.iter().filter(|v| **v != 0).count();
    let mut x = vec![0u8; n];
    if bad == 0 {
        return Some(x);
    }
    let total: u64 = 1u64 << n;
    for k in 1..total {
        let v = k.trailing_zeros() as usize;
        let up = x[v] == 0;
        x[v] ^= 1;
        for &(i, t) in &occ[v] {
            let z = &mut zeros[i][t];
            let coef = c.eqs[i].terms[t].0;
            let before = value[i];
            if up {
                *z -= 1;
                if *z == 0 {
                    value[i] += coef;
                }
            } else {
                if *z == 0 {
                    value[i] -= coef;
                }
                *z += 1;
            }
            match (before == 0, value[i] == 0) {
                (true, false) => bad += 1,
                (false, true) => bad -= 1,
                _ => {}
            }
        }
        if bad == 0 {
            return Some(x);
        }
    }
    None
}
