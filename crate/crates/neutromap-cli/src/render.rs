use neutromap::{NeutroMatrix, NeutroValue, Rational};

/// Left-aligned first column, right-aligned rest.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = header.iter().map(|h| h.chars().count()).collect::<Vec<_>>();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut out = String::new();
        for (k, c) in cells.iter().enumerate().take(cols) {
            if k == 0 {
                out.push_str(&format!("{c:<w$}", w = width[0]));
            } else {
                out.push_str(&format!("  {c:>w$}", w = width[k]));
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

pub fn matrix(rows: &[String], cols: &[String], m: &NeutroMatrix) -> String {
    let header: Vec<String> = std::iter::once(String::new()).chain(cols.iter().cloned()).collect();
    let body: Vec<Vec<String>> = (0..m.rows())
        .map(|i| {
            std::iter::once(rows[i].clone())
                .chain(m.row(i).iter().map(NeutroValue::to_string))
                .collect()
        })
        .collect();
    table(&header, &body)
}

pub fn decimal(r: &Rational) -> f64 {
    NeutroValue::crisp(r.clone()).to_f64()
}

/// `p/q (0.xxxx)`, or just the integer.
pub fn exact(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("{r} ({:.4})", decimal(r))
    }
}

pub fn opt_exact(r: Option<&Rational>) -> String {
    r.map_or_else(|| "undefined".to_string(), exact)
}

pub fn json(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values always serialise") + "\n"
}
