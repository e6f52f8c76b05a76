use regex::Regex;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Commands inserted before `\begin{document}`: framed floats plus colored
/// caption labels and text.
pub const PREAMBLE_BLOCK: &str = r"\usepackage{color}
\usepackage{floatrow}
\usepackage{tcolorbox}

\DeclareColorBox{figurecolorbox}{\fcolorbox{red}{white}}
\DeclareColorBox{tablecolorbox}{\fcolorbox{yellow}{white}}

\floatsetup[figure]{framestyle=colorbox,
    colorframeset=figurecolorbox, framearound=all,
    frameset={\fboxrule1pt\fboxsep0pt}}
\floatsetup[table]{framestyle=colorbox,
    colorframeset=tablecolorbox, framearound=all,
    frameset={\fboxrule1pt\fboxsep0pt}}

\usepackage[labelfont={color=green},
    textfont={color=blue}]{caption}
";

fn begin_document() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\\begin\s*\{document\}").unwrap())
}

/// Preamble commands that would clash with the injected block: caption
/// options set twice, float styles redefined, or packages known to fight
/// with `caption`/`floatrow`.
fn conflicts() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(concat!(
            r"\\usepackage\s*\[[^\]]*\]\s*\{[^}]*\bcaption\b[^}]*\}",
            r"|\\captionsetup\b",
            r"|\\floatsetup\b",
            r"|\\DeclareColorBox\b",
            r"|\\usepackage\s*(\[[^\]]*\])?\s*\{[^}]*\b(subfigure|float)\b[^}]*\}",
        ))
        .unwrap()
    })
}

/// Strips a `%` comment, honoring `\%` escapes.
fn strip_comment(line: &str) -> &str {
    let mut backslashes = 0usize;
    for (i, b) in line.bytes().enumerate() {
        if b == b'\\' {
            backslashes += 1;
            continue;
        }
        if b == b'%' && backslashes % 2 == 0 {
            return &line[..i];
        }
        backslashes = 0;
    }
    line
}

/// Inserts [`PREAMBLE_BLOCK`] immediately before the first uncommented
/// `\begin{document}`. Every other byte of the source is preserved.
pub fn inject_preamble(source: &str) -> Result<String> {
    let mut offset = 0;
    let mut marker = None;
    for (idx, line) in source.split_inclusive('\n').enumerate() {
        let code = strip_comment(line);
        if let Some(m) = begin_document().find(code) {
            marker = Some((offset + m.start(), idx));
            break;
        }
        if let Some(m) = conflicts().find(code) {
            return Err(Error::PackageConflict {
                line: idx + 1,
                text: m.as_str().to_string(),
            });
        }
        offset += line.len();
    }
    let (pos, _) = marker.ok_or(Error::NotMainFile)?;
    // Preamble text on the marker line itself, before the marker.
    let line_start = source[..pos].rfind('\n').map_or(0, |i| i + 1);
    if let Some(m) = conflicts().find(strip_comment(&source[line_start..pos])) {
        let line = source[..pos].matches('\n').count() + 1;
        return Err(Error::PackageConflict {
            line,
            text: m.as_str().to_string(),
        });
    }

    let mut out = String::with_capacity(source.len() + PREAMBLE_BLOCK.len() + 1);
    out.push_str(&source[..pos]);
    if pos > line_start {
        out.push('\n');
    }
    out.push_str(PREAMBLE_BLOCK);
    out.push_str(&source[pos..]);
    Ok(out)
}
