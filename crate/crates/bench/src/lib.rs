//! Inputs shared by the benchmarks.

use aqa_core::{Domain, Question, Source};

pub const QUESTIONS: [&str; 5] =
    ["من صمم برج ايفل؟", "أين تقع شلالات نياغرا؟", "متى استقلت تونس؟", "ماهي عاصمة ماليزيا؟", "كم يبلغ طول نهر الأمازون؟"];

pub fn questions() -> Vec<Question> {
    QUESTIONS
        .iter()
        .enumerate()
        .map(|(i, q)| Question::new(format!("b{i}"), *q, Source::Faq, Domain::WorldNews))
        .collect()
}

const PARAGRAPHS: [&str; 4] = [
    "مصمم تمثال الحرية و برج إيفل هو نفسه المهندس الذي صمم كوبري إمبابة بالقاهرة، و هو المعماري الفرنسي جوستاف إيفل.",
    "بني برج إيفل في فرنسا بمناسبة مرور مئة عام على الثورة الفرنسية عام 1889.",
    "يبلغ طول نهر الأمازون حوالي 6400 كم ويعد من أطول أنهار العالم.",
    "استقلت تونس عن فرنسا في 20 مارس 1956 بعد مفاوضات طويلة.",
];

/// A page of `paragraphs` paragraphs with navigation, scripts and entities mixed in.
pub fn synthetic_page(paragraphs: usize) -> String {
    let mut html = String::from(
        "<!DOCTYPE html><html><head><meta charset=\"utf-8\"><title>صفحة</title>\
         <script>var x = '<p>';</script></head><body><nav><a href=\"/\">الرئيسية</a></nav>",
    );
    for i in 0..paragraphs {
        html.push_str("<p class=\"c\">");
        html.push_str(PARAGRAPHS[i % PARAGRAPHS.len()]);
        html.push_str(" &amp; <b>نص</b><br></p>\n");
    }
    html.push_str("</body></html>");
    html
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_page_has_requested_paragraphs() {
        let text = aqa_core::retrieval::html_to_text(&synthetic_page(12));
        // the title sits in <head> and is dropped; the nav link is one passage
        assert_eq!(aqa_core::retrieval::segment_passages(&text).len(), 13);
    }
}
