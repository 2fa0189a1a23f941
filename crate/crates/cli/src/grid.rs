use std::str::FromStr;

/// One swept parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub log: bool,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("grid `{s}` is not of the form name=start:stop:steps"))?;
        let parts: Vec<&str> = range.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!(
                "grid `{s}` is not of the form name=start:stop:steps"
            ));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("grid `{s}`: {e}"))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let steps: usize = parts[2]
            .trim()
            .parse()
            .map_err(|e| format!("grid `{s}`: {e}"))?;
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            Some(other) => return Err(format!("grid `{s}`: unknown spacing `{other}`")),
        };
        if steps < 1 {
            return Err(format!("grid `{s}`: steps must be at least 1"));
        }
        if !(start <= stop) {
            return Err(format!("grid `{s}`: start exceeds stop"));
        }
        if log && start <= 0.0 {
            return Err(format!("grid `{s}`: log spacing needs a positive start"));
        }
        Ok(Self {
            name: name.trim().to_string(),
            start,
            stop,
            steps,
            log,
        })
    }
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.steps {
                    self.stop
                } else if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .map(|v| v.clamp(self.start, self.stop))
            .collect()
    }
}

/// Grid points in row-major order, first parameter slowest.
pub fn points(grids: &[GridSpec]) -> Vec<Vec<(String, f64)>> {
    let mut out = vec![Vec::new()];
    for g in grids {
        let vals = g.values();
        out = out
            .into_iter()
            .flat_map(|pt| {
                vals.iter().map(move |v| {
                    let mut p = pt.clone();
                    p.push((g.name.clone(), *v));
                    p
                })
            })
            .collect();
    }
    out
}
