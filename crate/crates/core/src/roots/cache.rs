//! Resumable JSON-lines scan log keyed by `(m, n)`.
//!
//! Workers send finished records through a channel to a single writer that
//! appends one line per record and flushes, so an interrupted run leaves a
//! valid prefix. A truncated final line is ignored on load.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::sync::mpsc;

use super::record::CoincidenceRecord;
use crate::error::{Error, Result};
use crate::par::{self, Mode};

fn io_err(e: std::io::Error) -> Error {
    Error::Format(format!("cache: {e}"))
}

/// Records already present in a cache file; later lines win.
pub fn load_cache(path: &Path) -> Result<BTreeMap<(u64, u64), CoincidenceRecord>> {
    let mut out = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(io_err(e)),
    };
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err)?;
        if let Ok(rec) = serde_json::from_str::<CoincidenceRecord>(&line) {
            out.insert(rec.key(), rec);
        }
    }
    Ok(out)
}

/// Computes `f(m, n)` for each pair, logging to `cache` when given. With
/// `resume` the pairs already logged are reused instead of recomputed;
/// without it the log is started afresh. Output is sorted by `(m, n)`.
pub fn run_cached<F>(
    pairs: &[(u64, u64)],
    mode: Mode,
    cache: Option<&Path>,
    resume: bool,
    f: F,
) -> Result<Vec<CoincidenceRecord>>
where
    F: Fn(u64, u64) -> Result<CoincidenceRecord> + Sync + Send,
{
    let wanted: BTreeSet<(u64, u64)> = pairs.iter().copied().collect();
    let mut done = match (cache, resume) {
        (Some(p), true) => load_cache(p)?,
        _ => BTreeMap::new(),
    };
    done.retain(|k, _| wanted.contains(k));
    let todo: Vec<(u64, u64)> = wanted.iter().filter(|k| !done.contains_key(k)).copied().collect();

    let mut sink = match cache {
        Some(p) => {
            let mut opts = OpenOptions::new();
            opts.create(true);
            if resume {
                opts.read(true).append(true);
            } else {
                opts.write(true).truncate(true);
            }
            Some(opts.open(p).map_err(io_err)?)
        }
        None => None,
    };
    if let (Some(file), true) = (sink.as_mut(), resume) {
        // make sure a torn last line does not swallow the next record
        let len = file.metadata().map_err(io_err)?.len();
        if len > 0 {
            let mut last = [0u8];
            file.seek(SeekFrom::Start(len - 1)).map_err(io_err)?;
            file.read_exact(&mut last).map_err(io_err)?;
            if last[0] != b'\n' {
                writeln!(file).map_err(io_err)?;
            }
        }
    }

    let (tx, rx) = mpsc::channel::<Result<CoincidenceRecord>>();
    let writer = std::thread::spawn(move || -> (Vec<CoincidenceRecord>, Option<Error>) {
        let mut fresh = Vec::new();
        let mut first_err = None;
        for item in rx {
            match item {
                Ok(rec) => {
                    if let Some(file) = sink.as_mut() {
                        let line = serde_json::to_string(&rec).expect("record serializes");
                        if let Err(e) = writeln!(file, "{line}").and_then(|_| file.flush()) {
                            first_err.get_or_insert(io_err(e));
                        }
                    }
                    fresh.push(rec);
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        (fresh, first_err)
    });
    par::send_each(mode, &todo, &tx, |&(m, n)| f(m, n));
    drop(tx);
    let (fresh, err) = writer.join().expect("writer thread");
    if let Some(e) = err {
        return Err(e);
    }
    for rec in fresh {
        done.insert(rec.key(), rec);
    }
    Ok(done.into_values().collect())
}
