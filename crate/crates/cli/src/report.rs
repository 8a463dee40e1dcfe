use serde_json::{json, Map, Value};

/// One oracle or identity check.
#[derive(Clone, Debug)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Residual {
    pub fn ok(&self) -> bool {
        self.value <= self.tol
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: &'static str,
    pub seed: u64,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub residuals: Vec<Residual>,
}

impl RunReport {
    pub fn new(command: &'static str, seed: u64) -> Self {
        RunReport {
            command,
            seed,
            inputs: Map::new(),
            outputs: Map::new(),
            residuals: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: Value) -> &mut Self {
        self.inputs.insert(key.into(), v);
        self
    }

    pub fn output(&mut self, key: &str, v: Value) -> &mut Self {
        self.outputs.insert(key.into(), v);
        self
    }

    pub fn residual(&mut self, name: &str, value: f64, tol: f64) -> &mut Self {
        self.residuals.push(Residual {
            name: name.into(),
            value,
            tol,
        });
        self
    }

    pub fn failures(&self) -> Vec<&Residual> {
        self.residuals.iter().filter(|r| !r.ok()).collect()
    }

    pub fn to_json(&self) -> Value {
        let residuals: Vec<Value> = self
            .residuals
            .iter()
            .map(|r| json!({ "name": r.name, "value": r.value, "tol": r.tol, "ok": r.ok() }))
            .collect();
        json!({
            "command": self.command,
            "seed": self.seed,
            "inputs": Value::Object(self.inputs.clone()),
            "outputs": Value::Object(self.outputs.clone()),
            "residuals": residuals,
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("command  {}\nseed     {}\n", self.command, self.seed);
        for (title, section) in [("inputs", &self.inputs), ("outputs", &self.outputs)] {
            out.push_str(title);
            out.push('\n');
            for (k, v) in section {
                render(&mut out, k, v, 1);
            }
        }
        out.push_str("residuals\n");
        let width = self.residuals.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.residuals {
            out.push_str(&format!(
                "  {:<width$}  {:>10.3e}  tol {:.0e}  {}\n",
                r.name,
                r.value,
                r.tol,
                if r.ok() { "ok" } else { "FAIL" }
            ));
        }
        out
    }
}

fn as_complex(v: &Value) -> Option<(f64, f64)> {
    match v.as_array()?.as_slice() {
        [re, im] => Some((re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

fn fmt_complex((re, im): (f64, f64)) -> String {
    format!("{re:+.6}{im:+.6}i")
}

fn complex_row(v: &Value) -> Option<Vec<String>> {
    let items = v.as_array()?;
    if items.is_empty() {
        return None;
    }
    items.iter().map(|x| as_complex(x).map(fmt_complex)).collect()
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(row) = complex_row(v) {
        out.push_str(&format!("{pad}{key}  [{}]\n", row.join(", ")));
        return;
    }
    if let Some(rows) = v
        .as_array()
        .filter(|a| !a.is_empty())
        .and_then(|a| a.iter().map(complex_row).collect::<Option<Vec<_>>>())
    {
        out.push_str(&format!("{pad}{key}\n"));
        for r in rows {
            out.push_str(&format!("{pad}  {}\n", r.join("  ")));
        }
        return;
    }
    match v {
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}\n"));
            for (k, x) in m {
                render(out, k, x, depth + 1);
            }
        }
        _ => out.push_str(&format!("{pad}{key}  {v}\n")),
    }
}
