def count_occurrences(items, target):
    count = 0
    for x in items:
        if x == target:
            count = count + 1
    return count
