//! Run configuration: `key=value` files and `--set` overrides.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use vilmap::persist::{fmt_f64, set_param};
use vilmap::Params;

/// Parameters plus seed after merging preset, config file and overrides.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub params: Params,
    pub seed: u64,
    pub warnings: Vec<String>,
}

fn apply(params: &mut Params, seed: &mut u64, key: &str, value: &str, origin: &str) -> Result<()> {
    let key = key.trim();
    if key == "seed" {
        *seed = value
            .trim()
            .parse()
            .with_context(|| format!("{origin}: bad seed `{value}`"))?;
        return Ok(());
    }
    match set_param(params, key, value) {
        Ok(true) => Ok(()),
        Ok(false) => bail!("{origin}: unknown key `{key}`"),
        Err(e) => bail!("{origin}: {key}: {e}"),
    }
}

pub fn split_assignment(s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .with_context(|| format!("expected key=value, got `{s}`"))
}

/// `preset`, then every line of `config`, then every `--set`, then `--seed`.
pub fn resolve(preset: Params, config: Option<&Path>, sets: &[String], seed: Option<u64>) -> Result<Resolved> {
    let mut params = preset;
    let mut file_seed = 0;
    if let Some(path) = config {
        require_file(path, "config file")?;
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{}:{}", path.display(), i + 1);
            let (k, v) = split_assignment(line).with_context(|| origin.clone())?;
            apply(&mut params, &mut file_seed, k, v, &origin)?;
        }
    }
    for s in sets {
        let (k, v) = split_assignment(s)?;
        apply(&mut params, &mut file_seed, k, v, "--set")?;
    }
    params.validate()?;
    let warnings = params.range_warnings();
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Resolved {
        params,
        seed: seed.unwrap_or(file_seed),
        warnings,
    })
}

pub fn require_file(path: &Path, what: &str) -> Result<()> {
    if !path.is_file() {
        bail!("{what} not found: {}", path.display());
    }
    Ok(())
}

/// Run manifest: enough to repeat the run.
#[derive(Debug, Default)]
pub struct Manifest {
    lines: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64) -> Self {
        let mut m = Manifest::default();
        m.add("command", command);
        m.add("version", env!("CARGO_PKG_VERSION"));
        m.add("seed", seed);
        m
    }

    pub fn add(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn path(&mut self, key: &str, path: &Path) {
        self.add(key, path.display());
    }

    pub fn params(&mut self, prefix: &str, p: &Params) {
        for (k, v) in [
            ("a_t", fmt_f64(p.a_t)),
            ("e_b", fmt_f64(p.e_b)),
            ("e_n", fmt_f64(p.e_n)),
            ("beta", fmt_f64(p.beta)),
            ("eps_ds", fmt_f64(p.eps_ds)),
            ("n_max", p.n_max.to_string()),
            ("d_min", p.d_min.to_string()),
            ("d_max", p.d_max.to_string()),
            ("minwd", fmt_f64(p.minwd)),
            ("epsilon", fmt_f64(p.epsilon)),
        ] {
            self.add(&format!("{prefix}{k}"), v);
        }
    }

    pub fn warnings(&mut self, warnings: &[String]) {
        for w in warnings {
            self.add("warning", w);
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }
}

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).with_context(|| format!("temp file in {}", dir.display()))?;
    std::io::Write::write_all(&mut tmp, contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Writes several files of one run. Everything is staged first so a failure
/// leaves no file of the run half written.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Self {
        Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn commit(self) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let mut staged = Vec::new();
        for (name, contents) in &self.files {
            let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
            std::io::Write::write_all(&mut tmp, contents.as_bytes())?;
            staged.push((tmp, self.dir.join(name)));
        }
        let mut written = Vec::new();
        for (tmp, path) in staged {
            tmp.persist(&path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "# comment\na_t=0.9\nseed=7\nminwd = 0.3\n").unwrap();
        let r = resolve(Params::default(), Some(&cfg), &["a_t=0.8".into()], None).unwrap();
        assert_eq!(r.params.a_t, 0.8);
        assert_eq!(r.params.minwd, 0.3);
        assert_eq!(r.seed, 7);
        let r = resolve(Params::default(), Some(&cfg), &[], Some(9)).unwrap();
        assert_eq!(r.seed, 9);
        assert!(resolve(Params::default(), None, &["nope=1".into()], None).is_err());
        assert!(resolve(Params::default(), None, &["a_t".into()], None).is_err());
        assert!(resolve(Params::default(), Some(&dir.path().join("missing")), &[], None).is_err());
    }

    #[test]
    fn gunpoint_preset_warns() {
        let r = resolve(Params::gunpoint(), None, &[], None).unwrap();
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn outputs_commit() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("nested");
        let mut o = Outputs::new(&out);
        o.add("a.txt", "one".into());
        o.add("b.txt", "two".into());
        let written = o.commit().unwrap();
        assert_eq!(written.len(), 2);
        assert_eq!(fs::read_to_string(out.join("b.txt")).unwrap(), "two");
        assert_eq!(fs::read_dir(&out).unwrap().count(), 2);
    }
}
