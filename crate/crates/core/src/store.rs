//! Database files, resumable runs, per-volume statistics and the reference tables.
//!
//! A database is plain text. Header lines start with `#`; every other line is
//! one class `d;V;x,y,z|x,y,z|…` listing the canonical representative's vertices.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::enumerate::{enumerate_polytopes_with, key_volume, EnumOptions, PolytopeClassSet, SeedResult};
use crate::equivalence::CanonicalKey;
use crate::error::{Error, Result};
use crate::point::LatticePoint;
use crate::polytope::LatticePolytope;
use crate::properties::{analyze, AnalyzeOptions, PropertyRecord};

pub const ALGORITHM_VERSION: u32 = 1;

/// One class: its canonical representative, origin first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatabaseRecord {
    pub dim: usize,
    pub volume: u64,
    pub vertices: Vec<LatticePoint>,
}

impl DatabaseRecord {
    pub fn new(key: &CanonicalKey, vertices: Vec<LatticePoint>) -> Self {
        DatabaseRecord { dim: vertices[0].dim(), volume: key_volume(key), vertices }
    }

    /// The canonical key, read off the representative.
    pub fn key(&self) -> CanonicalKey {
        let mut s = format!("{};{}", self.dim, self.volume);
        for v in &self.vertices[1..] {
            for x in &v.0 {
                s.push(';');
                s.push_str(&x.to_string());
            }
        }
        CanonicalKey::parse(&s).expect("record yields a well-formed key")
    }

    pub fn polytope(&self) -> Result<LatticePolytope> {
        LatticePolytope::new(&self.vertices)
    }

    pub fn parse(line: &str, lineno: usize) -> Result<Self> {
        let bad = |msg: String| Error::Format { line: lineno, msg };
        let mut parts = line.trim().splitn(3, ';');
        let (Some(d), Some(v), Some(rest)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected `d;V;vertices`".into()));
        };
        let dim: usize = d.parse().map_err(|_| bad(format!("bad dimension `{d}`")))?;
        let volume: u64 = v.parse().map_err(|_| bad(format!("bad volume `{v}`")))?;
        let mut vertices = Vec::new();
        for (i, vs) in rest.split('|').enumerate() {
            let c: std::result::Result<Vec<i64>, _> = vs.split(',').map(|x| x.trim().parse::<i64>()).collect();
            let c = c.map_err(|_| bad(format!("bad coordinates in vertex {}", i + 1)))?;
            if c.len() != dim {
                return Err(bad(format!("vertex {} has {} coordinates, expected {dim}", i + 1, c.len())));
            }
            vertices.push(LatticePoint(c));
        }
        if dim == 0 || vertices.len() <= dim {
            return Err(bad(format!("{} vertices cannot span dimension {dim}", vertices.len())));
        }
        if vertices[0].0.iter().any(|&x| x != 0) {
            return Err(bad("first vertex must be the origin".into()));
        }
        Ok(DatabaseRecord { dim, volume, vertices })
    }
}

impl fmt::Display for DatabaseRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{};", self.dim, self.volume)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let c: Vec<String> = v.0.iter().map(|x| x.to_string()).collect();
            f.write_str(&c.join(","))?;
        }
        Ok(())
    }
}

/// Records of a class set, ordered by `(volume, key)`.
pub fn records(set: &PolytopeClassSet) -> Vec<DatabaseRecord> {
    set.sorted().into_iter().map(|(k, v)| DatabaseRecord::new(k, v.clone())).collect()
}

/// Parameters that determine a database's contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbInfo {
    pub dim: usize,
    pub max_volume: u64,
    pub algorithm_version: u32,
    /// `enumerate` or `simplices`.
    pub kind: String,
}

impl DbInfo {
    pub fn polytopes(dim: usize, max_volume: u64) -> Self {
        DbInfo { dim, max_volume, algorithm_version: ALGORITHM_VERSION, kind: "enumerate".into() }
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("serializable");
        format!("{:x}", Sha256::digest(json))
    }
}

pub fn write_db(path: &Path, info: &DbInfo, records: &[DatabaseRecord]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        write_db_to(&mut w, info, records)?;
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_db_to(w: &mut dyn Write, info: &DbInfo, records: &[DatabaseRecord]) -> Result<()> {
    writeln!(w, "# latpoly database")?;
    writeln!(w, "# info {}", serde_json::to_string(info)?)?;
    writeln!(w, "# manifest-sha256 {}", info.hash())?;
    writeln!(w, "# records {}", records.len())?;
    for r in records {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

/// Reads a database; the header is optional.
pub fn read_db(path: &Path) -> Result<(Option<DbInfo>, Vec<DatabaseRecord>)> {
    read_db_from(BufReader::new(fs::File::open(path)?))
}

pub fn read_db_from(r: impl BufRead) -> Result<(Option<DbInfo>, Vec<DatabaseRecord>)> {
    let mut info = None;
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if let Some(h) = line.strip_prefix('#') {
            if let Some(j) = h.trim().strip_prefix("info ") {
                let parsed: DbInfo =
                    serde_json::from_str(j).map_err(|e| Error::Format { line: lineno, msg: e.to_string() })?;
                info = Some(parsed);
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        out.push(DatabaseRecord::parse(&line, lineno)?);
    }
    Ok((info, out))
}

/// Progress of an enumeration run, stored next to the output as `<out>.manifest.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub dim: usize,
    pub max_volume: u64,
    pub algorithm_version: u32,
    pub completed_seeds: BTreeSet<String>,
    pub started_unix: u64,
    pub updated_unix: u64,
    pub workers: usize,
    pub finished: bool,
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn manifest_path(out: &Path) -> PathBuf {
    append_ext(out, "manifest.json")
}

/// Per-seed results, appended as seeds finish.
pub fn journal_path(out: &Path) -> PathBuf {
    append_ext(out, "journal")
}

fn append_ext(p: &Path, ext: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = append_ext(path, "tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

struct Checkpoint {
    journal: BufWriter<fs::File>,
    manifest: RunManifest,
    manifest_path: PathBuf,
    last_save: Instant,
}

impl Checkpoint {
    fn record(&mut self, seed: &CanonicalKey, result: &SeedResult) -> Result<()> {
        for (k, v) in result {
            writeln!(self.journal, "{}", DatabaseRecord::new(k, v.clone()))?;
        }
        writeln!(self.journal, "# done {seed}")?;
        self.manifest.completed_seeds.insert(seed.to_string());
        if self.last_save.elapsed().as_secs() >= 2 {
            self.flush()?;
        }
        Ok(())
    }

    /// The journal is flushed before the manifest, so every seed the manifest
    /// lists has its results on disk.
    fn flush(&mut self) -> Result<()> {
        self.journal.flush()?;
        self.journal.get_ref().sync_data()?;
        self.manifest.updated_unix = now_unix();
        self.manifest.save(&self.manifest_path)?;
        self.last_save = Instant::now();
        Ok(())
    }
}

/// Completed seeds and their classes, from a previous run's manifest and journal.
/// Seeds in the journal but missing from the manifest are redone.
fn load_progress(out: &Path, dim: usize, max_volume: u64) -> Result<(RunManifest, HashSet<CanonicalKey>, SeedResult)> {
    let m = RunManifest::load(&manifest_path(out))?;
    if m.dim != dim || m.max_volume != max_volume || m.algorithm_version != ALGORITHM_VERSION {
        return Err(Error::PreconditionViolated(format!(
            "manifest is for d={} K={} (version {}), not d={dim} K={max_volume}",
            m.dim, m.max_volume, m.algorithm_version
        )));
    }
    let file = BufReader::new(fs::File::open(journal_path(out))?);
    let mut pending: SeedResult = Vec::new();
    let mut done = HashSet::new();
    let mut kept = Vec::new();
    for (i, line) in file.lines().enumerate() {
        let line = line?;
        if let Some(seed) = line.strip_prefix("# done ") {
            if m.completed_seeds.contains(seed) {
                done.insert(CanonicalKey::parse(seed).ok_or(Error::Format { line: i + 1, msg: "bad seed key".into() })?);
                kept.append(&mut pending);
            }
            pending.clear();
        } else if !line.starts_with('#') && !line.trim().is_empty() {
            // a torn last line from an interrupted write belongs to an unfinished seed
            if let Ok(r) = DatabaseRecord::parse(&line, i + 1) {
                pending.push((r.key(), r.vertices));
            }
        }
    }
    if done.len() != m.completed_seeds.len() {
        return Err(Error::PreconditionViolated("manifest lists seeds missing from the journal".into()));
    }
    Ok((m, done, kept))
}

/// Runs (or resumes) an enumeration that checkpoints next to `out`, then writes
/// the database and marks the manifest finished.
pub fn enumerate_to_file(
    dim: usize,
    max_volume: u64,
    out: &Path,
    resume: bool,
    base: &EnumOptions,
) -> Result<Vec<DatabaseRecord>> {
    let mut opts = base.clone();
    let (manifest, journal) = if resume && manifest_path(out).exists() {
        let (mut m, done, kept) = load_progress(out, dim, max_volume)?;
        opts.skip_seeds = done;
        opts.preloaded = kept;
        m.workers = rayon::current_num_threads();
        m.finished = false;
        // rewrite the journal with only the trusted part
        let mut w = BufWriter::new(fs::File::create(journal_path(out))?);
        let mut by_seed: Vec<&String> = m.completed_seeds.iter().collect();
        by_seed.sort();
        for (k, v) in &opts.preloaded {
            writeln!(w, "{}", DatabaseRecord::new(k, v.clone()))?;
        }
        for s in by_seed {
            writeln!(w, "# done {s}")?;
        }
        w.flush()?;
        (m, fs::OpenOptions::new().append(true).open(journal_path(out))?)
    } else {
        let t = now_unix();
        let m = RunManifest {
            dim,
            max_volume,
            algorithm_version: ALGORITHM_VERSION,
            completed_seeds: BTreeSet::new(),
            started_unix: t,
            updated_unix: t,
            workers: rayon::current_num_threads(),
            finished: false,
        };
        (m, fs::File::create(journal_path(out))?)
    };
    let cp = Mutex::new(Checkpoint {
        journal: BufWriter::new(journal),
        manifest,
        manifest_path: manifest_path(out),
        last_save: Instant::now(),
    });
    cp.lock().unwrap().flush()?;
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let set = enumerate_polytopes_with(dim, max_volume, &opts, &|seed, r| {
        if let Err(e) = cp.lock().unwrap().record(seed, r) {
            failure.lock().unwrap().get_or_insert(e);
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let recs = records(&set);
    write_db(out, &DbInfo::polytopes(dim, max_volume), &recs)?;
    let mut cp = cp.into_inner().unwrap();
    cp.manifest.finished = true;
    cp.flush()?;
    Ok(recs)
}

/// Counts for one volume; `None` marks a property not decided for every class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatsRow {
    pub volume: u64,
    pub tot: usize,
    pub sp: Option<usize>,
    pub va: Option<usize>,
    pub idp: Option<usize>,
    pub uc: Option<usize>,
    pub ut: Option<usize>,
    pub smooth: Option<usize>,
}

impl StatsRow {
    pub fn columns(&self) -> [Option<usize>; 7] {
        [Some(self.tot), self.sp, self.va, self.idp, self.uc, self.ut, self.smooth]
    }

    /// TOT >= SP >= VA >= IDP >= UC >= UT over the decided columns.
    pub fn hierarchy_holds(&self) -> bool {
        let c: Vec<usize> = self.columns()[..6].iter().flatten().copied().collect();
        c.windows(2).all(|w| w[0] >= w[1])
    }
}

pub const STATS_COLUMNS: [&str; 7] = ["TOT", "SP", "VA", "IDP", "UC", "UT", "smooth"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatsTable {
    pub dim: usize,
    pub rows: Vec<StatsRow>,
}

/// Tallies analysed records by volume. Volumes `1..=max_volume` all get a row.
pub fn stats(dim: usize, max_volume: u64, analysed: &[(DatabaseRecord, PropertyRecord)]) -> StatsTable {
    let mut rows: Vec<StatsRow> = (1..=max_volume).map(|v| StatsRow { volume: v, ..Default::default() }).collect();
    let mut decided = vec![[true; 6]; max_volume as usize];
    let mut counts = vec![[0usize; 6]; max_volume as usize];
    for (rec, p) in analysed {
        let i = rec.volume as usize - 1;
        rows[i].tot += 1;
        let flags = [p.spanning, p.very_ample, p.idp, p.unimodular_cover, p.unimodular_triangulation, p.smooth];
        for (j, f) in flags.iter().enumerate() {
            match f {
                Some(true) => counts[i][j] += 1,
                Some(false) => {}
                None => decided[i][j] = false,
            }
        }
    }
    for (i, r) in rows.iter_mut().enumerate() {
        let c = |j: usize| decided[i][j].then_some(counts[i][j]);
        r.sp = c(0);
        r.va = c(1);
        r.idp = c(2);
        r.uc = c(3);
        r.ut = c(4);
        r.smooth = c(5);
    }
    StatsTable { dim, rows }
}

/// Analyses every record in parallel, keeping input order.
pub fn analyze_all(recs: &[DatabaseRecord], opts: &AnalyzeOptions) -> Result<Vec<PropertyRecord>> {
    recs.par_iter().map(|r| Ok(analyze(&r.polytope()?, opts))).collect()
}

impl fmt::Display for StatsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>6}", "Volume")?;
        for c in STATS_COLUMNS {
            write!(f, " {c:>8}")?;
        }
        writeln!(f)?;
        for r in &self.rows {
            write!(f, "{:>6}", r.volume)?;
            for c in r.columns() {
                match c {
                    Some(n) => write!(f, " {n:>8}")?,
                    None => write!(f, " {:>8}", "")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl StatsTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("volume,tot,sp,va,idp,uc,ut,smooth\n");
        for r in &self.rows {
            let cells: Vec<String> = r.columns().iter().map(|c| c.map(|n| n.to_string()).unwrap_or_default()).collect();
            s.push_str(&format!("{},{}\n", r.volume, cells.join(",")));
        }
        s
    }
}

/// Reference counts. Cells are `None` where the reference leaves them open.
#[derive(Clone, Debug, Default)]
pub struct Fixture {
    /// `(dim, volume)` to TOT, SP, VA, IDP, UC, UT.
    pub counts: BTreeMap<(usize, u64), [Option<usize>; 6]>,
    /// `(dim, volume)` to the number of smooth classes.
    pub smooth: BTreeMap<(usize, u64), usize>,
}

const COUNTS_DATA: &str = include_str!("../data/counts.txt");
const SMOOTH_DATA: &str = include_str!("../data/smooth.txt");

impl Fixture {
    pub fn embedded() -> Self {
        Self::parse(COUNTS_DATA, SMOOTH_DATA).expect("embedded tables are well formed")
    }

    pub fn parse(counts: &str, smooth: &str) -> Result<Self> {
        let mut f = Fixture::default();
        for (i, line) in data_lines(counts) {
            let w: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Format { line: i, msg: format!("expected 8 fields, got `{line}`") };
            if w.len() != 8 {
                return Err(bad());
            }
            let mut cells = [None; 6];
            for (c, x) in cells.iter_mut().zip(&w[2..]) {
                *c = if *x == "-" { None } else { Some(x.parse().map_err(|_| bad())?) };
            }
            f.counts.insert((w[0].parse().map_err(|_| bad())?, w[1].parse().map_err(|_| bad())?), cells);
        }
        for (i, line) in data_lines(smooth) {
            let w: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Format { line: i, msg: format!("bad row `{line}`") })?;
            if w.len() != 3 {
                return Err(Error::Format { line: i, msg: format!("expected 3 fields, got `{line}`") });
            }
            f.smooth.insert((w[0], w[1] as u64), w[2]);
        }
        Ok(f)
    }

    /// Expected value of a stats column (`STATS_COLUMNS` index) for `(dim, volume)`.
    pub fn expected(&self, dim: usize, volume: u64, column: usize) -> Option<usize> {
        if column == 6 {
            self.smooth.get(&(dim, volume)).copied()
        } else {
            self.counts.get(&(dim, volume)).and_then(|c| c[column])
        }
    }
}

fn data_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub dim: usize,
    pub volume: u64,
    pub column: &'static str,
    pub expected: usize,
    pub found: usize,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} V={} {}: expected {}, found {}", self.dim, self.volume, self.column, self.expected, self.found)
    }
}

/// Result of comparing a table with the reference.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub compared: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares every cell present both in the table and in the reference.
pub fn verify(table: &StatsTable, fixture: &Fixture) -> VerifyReport {
    let mut rep = VerifyReport::default();
    for r in &table.rows {
        for (j, found) in r.columns().iter().enumerate() {
            let (Some(found), Some(expected)) = (found, fixture.expected(table.dim, r.volume, j)) else {
                continue;
            };
            rep.compared += 1;
            if *found != expected {
                rep.mismatches.push(Mismatch {
                    dim: table.dim,
                    volume: r.volume,
                    column: STATS_COLUMNS[j],
                    expected,
                    found: *found,
                });
            }
        }
    }
    rep
}

/// Keys present in only one of two databases.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DbDiff {
    pub only_left: Vec<CanonicalKey>,
    pub only_right: Vec<CanonicalKey>,
    pub duplicates_left: usize,
    pub duplicates_right: usize,
}

impl DbDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty() && self.duplicates_left == 0 && self.duplicates_right == 0
    }
}

pub fn diff(left: &[DatabaseRecord], right: &[DatabaseRecord]) -> DbDiff {
    let keys = |rs: &[DatabaseRecord]| {
        let all: Vec<CanonicalKey> = rs.iter().map(|r| r.key()).collect();
        let set: BTreeSet<CanonicalKey> = all.iter().cloned().collect();
        let dups = all.len() - set.len();
        (set, dups)
    };
    let (a, da) = keys(left);
    let (b, db) = keys(right);
    DbDiff {
        only_left: a.difference(&b).cloned().collect(),
        only_right: b.difference(&a).cloned().collect(),
        duplicates_left: da,
        duplicates_right: db,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_polytopes;

    #[test]
    fn record_round_trip() {
        let set = enumerate_polytopes(3, 2);
        let recs = records(&set);
        assert_eq!(recs.len(), 4);
        for (r, (k, _)) in recs.iter().zip(set.sorted()) {
            assert_eq!(&r.key(), k);
        }
        let mut buf = Vec::new();
        let info = DbInfo::polytopes(3, 2);
        write_db_to(&mut buf, &info, &recs).unwrap();
        let (i, back) = read_db_from(&buf[..]).unwrap();
        assert_eq!(i, Some(info));
        assert_eq!(back, recs);
    }

    #[test]
    fn empty_database() {
        let mut buf = Vec::new();
        write_db_to(&mut buf, &DbInfo::polytopes(2, 1), &[]).unwrap();
        assert!(buf.iter().filter(|&&c| c == b'\n').count() >= 1);
        assert!(read_db_from(&buf[..]).unwrap().1.is_empty());
    }

    #[test]
    fn corrupt_line_is_reported() {
        let text = "# latpoly database\n2;1;0,0|1,0|0,1\n2;2;0,0|1,x|0,1\n";
        match read_db_from(text.as_bytes()) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a format error, got {other:?}"),
        }
        assert!(matches!(read_db_from("2;1;0,0|1,0,0|0,1\n".as_bytes()), Err(Error::Format { line: 1, .. })));
        assert!(matches!(read_db_from("2;1\n".as_bytes()), Err(Error::Format { line: 1, .. })));
    }

    #[test]
    fn fixture_shape() {
        let f = Fixture::embedded();
        assert_eq!(f.expected(3, 5, 0), Some(19));
        assert_eq!(f.expected(6, 5, 3), Some(27));
        assert_eq!(f.expected(3, 17, 4), None);
        let total: usize = (1..=36).map(|v| f.smooth[&(3, v)]).sum();
        assert_eq!(total, 1588);
        for ((d, _), c) in &f.counts {
            let decided: Vec<usize> = c.iter().flatten().copied().collect();
            assert!(decided.windows(2).all(|w| w[0] >= w[1]), "d={d}");
        }
    }
}
