//! Grid specifications for `sweep`: `v`, `v1,v2,...`, `lo:hi:n` or `lo:hi:n:log`.

pub const MAX_GRID_POINTS: usize = 1_000_000;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let (lo, hi, n, log) = match parts.as_slice() {
            [lo, hi, n] => (*lo, *hi, *n, false),
            [lo, hi, n, "log"] => (*lo, *hi, *n, true),
            _ => return Err(format!("bad range '{spec}', expected lo:hi:n[:log]")),
        };
        let lo: f64 = parse_num(lo)?;
        let hi: f64 = parse_num(hi)?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| format!("bad point count in '{spec}'"))?;
        if n > MAX_GRID_POINTS {
            return Err(format!("grid '{spec}' exceeds {MAX_GRID_POINTS} points"));
        }
        if log && (lo <= 0.0 || hi <= 0.0) {
            return Err(format!("log grid '{spec}' needs positive bounds"));
        }
        let at = |t: f64| {
            if log {
                (lo.ln() + t * (hi.ln() - lo.ln())).exp()
            } else {
                lo + t * (hi - lo)
            }
        };
        Ok(match n {
            0 => vec![],
            1 => vec![lo],
            _ => (0..n)
                .map(|i| {
                    if i + 1 == n {
                        hi
                    } else {
                        at(i as f64 / (n - 1) as f64)
                    }
                })
                .collect(),
        })
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_num)
            .collect()
    }
}

pub fn parse_num(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("'{s}' is not a number"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("2.5").unwrap(), vec![2.5]);
        assert_eq!(parse_grid("1,2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0:1:0").unwrap(), Vec::<f64>::new());
        let g = parse_grid("1:100:3:log").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && g[2] == 100.0);
    }

    #[test]
    fn rejects() {
        assert!(parse_grid("a").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:2:lin").is_err());
        assert!(parse_grid("0:1:2:log").is_err());
        assert!(parse_grid("0:1:2000000").is_err());
    }
}
