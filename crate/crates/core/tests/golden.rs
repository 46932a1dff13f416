use std::path::{Path, PathBuf};

use clap::Parser;
use knx::cli::{execute, Cli};
use knx::io::{ProblemFile, Report};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn problems() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

fn run(command: &str, file: &Path) -> Report {
    let cli = Cli::parse_from(["knx", command, file.to_str().unwrap()]);
    execute(&cli).unwrap().0
}

#[test]
fn problem_files_round_trip() {
    for path in problems() {
        let parsed = ProblemFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(ProblemFile::parse(&parsed.render()).unwrap(), parsed, "{}", path.display());
    }
}

#[test]
fn reports_match_snapshots() {
    let mut checked = 0;
    for path in problems() {
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        for command in ["strata", "forbidden", "check"] {
            let expected = dir().join("expected").join(format!("{stem}.{command}.txt"));
            let Ok(expected) = std::fs::read_to_string(&expected) else { continue };
            let report = run(command, &path);
            assert_eq!(report.render_text(), expected, "{stem} {command}");
            assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);
            checked += 1;
        }
    }
    assert_eq!(checked, 18);
}
