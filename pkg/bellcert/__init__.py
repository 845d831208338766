# Certified Bell number toolkit
